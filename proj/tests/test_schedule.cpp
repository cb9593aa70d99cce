/*
Copyright 2026 The impsched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <doctest.h>

#include <random>
#include <sstream>

#include "impsched/energy.hpp"
#include "impsched/experiments.hpp"
#include "impsched/generator.hpp"
#include "impsched/imprecision.hpp"
#include "impsched/listsched.hpp"
#include "impsched/schedule.hpp"
#include "support/oracles.hpp"

using namespace impsched;

namespace {

Task make(std::string id, Cycles M, Cycles O, Cycles m, double pt = 0.5) { return Task{std::move(id), M, O, m, pt}; }

TaskGraph single(Cycles M, Cycles O, double pt, double deadline) {
    TaskGraph g;
    g.add_task(make("a", M, O, 0, pt));
    g.set_deadline(deadline);
    return g;
}

Assignment on_one(std::size_t n) {
    Assignment a;
    a.proc_of.assign(n, 0);
    a.order.assign(1, {});
    for (std::size_t u = 0; u < n; ++u) a.order[0].push_back(u);
    return a;
}

struct Solved {
    ScheduleProgram prog;
    lp::Solution sol;
};

Solved solve(ScheduleProgram prog) {
    lp::Solution sol = lp::solve(prog.lp);
    return {std::move(prog), std::move(sol)};
}

bool fails_check(const VerificationReport &r, const std::string &name) {
    const auto *c = r.find(name);
    return c != nullptr && !c->passed;
}

const PowerModel kPm = default_power_model();
const FrequencySet kFs = default_frequencies();

}  // namespace

TEST_CASE("qos lp on a single task") {
    const TaskGraph g = single(1000000, 1000000, 0.3, 1.0);
    const auto lab = imp_label(g);
    const auto r = solve(build_qos_lp(g, lab.workloads, on_one(1), kPm, kFs, 1.0, 1.0));
    REQUIRE(r.sol.optimal());
    const Schedule s = extract_schedule(r.prog, r.sol);
    CHECK(s.optional_cycles[0] == doctest::Approx(1e6));
    CHECK(objective_in_si(r.prog, r.sol) == doctest::Approx(1.0));

    // Energy for exactly the mandatory part at the cheapest level of a
    // monotone model: nothing left for optional cycles.
    const PowerModel mono{kPm.alpha, kPm.beta, kPm.gamma, 0.0};
    const double eps = 1e6 * energy_per_cycle(mono, kFs.min());
    const auto t = solve(build_qos_lp(g, lab.workloads, on_one(1), mono, kFs, eps, 1.0));
    REQUIRE(t.sol.optimal());
    CHECK(objective_in_si(t.prog, t.sol) == doctest::Approx(0.3).epsilon(1e-7));

    // Deadline shorter than the mandatory part at f_max.
    const auto inf = solve(build_qos_lp(g, lab.workloads, on_one(1), kPm, kFs, 1.0, 0.9e6 / kFs.max()));
    CHECK(inf.sol.status == lp::Status::infeasible);
}

TEST_CASE("min energy lp corners") {
    const TaskGraph g = single(1500000, 500000, 0.3, 1.0);
    const auto r = solve(build_min_energy_lp(g, on_one(1), kPm, kFs, 1.0));
    REQUIRE(r.sol.optimal());
    const double cheapest = energy_per_cycle(kPm, kFs[cheapest_frequency(kPm, kFs)]);
    CHECK(objective_in_si(r.prog, r.sol) == doctest::Approx(2e6 * cheapest).epsilon(1e-9));

    const double tight = 2e6 / kFs.max();
    const auto t = solve(build_min_energy_lp(g, on_one(1), kPm, kFs, tight));
    REQUIRE(t.sol.optimal());
    const Schedule s = extract_schedule(t.prog, t.sol);
    CHECK(s.cycles[0].back() == doctest::Approx(2e6).epsilon(1e-6));
    CHECK(objective_in_si(t.prog, t.sol) == doctest::Approx(2e6 * energy_per_cycle(kPm, kFs.max())).epsilon(1e-6));
}

TEST_CASE("min energy lp against a grid search on a two task chain") {
    // Two frequencies keep the grid one-dimensional per task.
    const FrequencySet fs(std::vector<double>{1.0e9, 2.0e9});
    const PowerModel pm = PowerModel::from_ghz_mw(100.0, 3.0, 0.0, 0.0);
    TaskGraph g;
    g.add_task(make("a", 1000000, 1000000, 0));
    g.add_task(make("b", 500000, 500000, 0));
    g.add_edge("a", "b", 0.2e-3);
    const double deadline = 2.4e-3;
    g.set_deadline(deadline);
    const auto r = solve(build_min_energy_lp(g, on_one(2), pm, fs, deadline));
    REQUIRE(r.sol.optimal());
    const double lp_energy = objective_in_si(r.prog, r.sol);

    const double wa = 2e6, wb = 1e6;
    double best = 1e300;
    const int steps = 2000;
    for (int i = 0; i <= steps; ++i) {
        const double ha = wa * i / steps;  // cycles of a at the high level
        const double da = (wa - ha) / fs[0] + ha / fs[1];
        const double left = deadline - 0.2e-3 - da;
        if (left < wb / fs[1] - 1e-15) continue;
        // Slowest feasible split of b.
        const double hb = std::clamp((wb / fs[0] - left) / (1.0 / fs[0] - 1.0 / fs[1]), 0.0, wb);
        const double e = (wa - ha + wb - hb) * energy_per_cycle(pm, fs[0]) + (ha + hb) * energy_per_cycle(pm, fs[1]);
        best = std::min(best, e);
    }
    CHECK(lp_energy <= best * (1 + 1e-9));
    CHECK(lp_energy >= best * (1 - 1e-3));
}

TEST_CASE("baseline lp budget boundaries") {
    GeneratorParams p;
    p.n_tasks = 15;
    p.seed = 4;
    const TaskGraph g = normalize_source(generate_random_graph(p));
    Platform pf;
    const EpsilonStar es = compute_epsilon_star(g, pf);
    REQUIRE(es.feasible);
    const auto asg = es.assignment;
    const auto at = solve(build_baseline_lp(g, asg, pf.power, pf.freqs, es.energy, g.deadline()));
    REQUIRE(at.sol.optimal());
    CHECK(objective_in_si(at.prog, at.sol) == doctest::Approx(1.0).epsilon(1e-6));
    const auto below = solve(build_baseline_lp(g, asg, pf.power, pf.freqs, 0.99 * es.energy, g.deadline()));
    REQUIRE(below.sol.optimal());
    CHECK(objective_in_si(below.prog, below.sol) < 1.0 - 1e-6);

    double mandatory_energy = 0.0;
    const double cheapest = energy_per_cycle(pf.power, pf.freqs[cheapest_frequency(pf.power, pf.freqs)]);
    for (TaskIndex u = 0; u < g.size(); ++u) {
        const double w = g.is_exit(u) ? g.task(u).mandatory : g.task(u).initial_workload();
        mandatory_energy += w * cheapest;
    }
    const auto none = solve(build_baseline_lp(g, asg, pf.power, pf.freqs, 0.999 * mandatory_energy, g.deadline()));
    CHECK(none.sol.status == lp::Status::infeasible);
}

TEST_CASE("qos is monotone in the budget and schedules verify") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        GeneratorParams p;
        p.n_tasks = 12 + 3 * seed;
        p.seed = seed;
        const TaskGraph g = normalize_source(generate_random_graph(p));
        Platform pf;
        const EpsilonStar es = compute_epsilon_star(g, pf);
        REQUIRE(es.feasible);
        CHECK(es.report->ok());
        const ProposedPlan plan = plan_proposed(g, pf);
        double prev = 2.0;
        for (double ratio = 1.0; ratio > 0.2; ratio -= 0.1) {
            const RunResult r = run_proposed(plan, pf, ratio * es.energy);
            if (!r.feasible) {
                CHECK_FALSE(r.numerical_failure);
                prev = -1.0;
                continue;
            }
            CHECK(r.verified);
            CHECK(r.qos <= prev + 1e-9);
            CHECK(r.energy <= ratio * es.energy * (1 + 1e-9));
            prev = r.qos;
        }
    }
}

TEST_CASE("lp optimum is invariant under row and column permutation") {
    GeneratorParams p;
    p.n_tasks = 14;
    p.seed = 21;
    const TaskGraph g = normalize_source(generate_random_graph(p));
    Platform pf;
    const EpsilonStar es = compute_epsilon_star(g, pf);
    REQUIRE(es.feasible);
    const ProposedPlan plan = plan_proposed(g, pf);
    const auto prog = build_qos_lp(plan.graph, plan.labels.workloads, plan.assignment, pf.power, pf.freqs,
                                   0.8 * es.energy, g.deadline());
    const lp::Solution base = lp::solve(prog.lp);
    REQUIRE(base.optimal());

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 3; ++trial) {
        const auto &src = prog.lp;
        std::vector<int> perm(static_cast<std::size_t>(src.num_variables()));
        for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = static_cast<int>(j);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> where(perm.size());
        lp::LinearProgram shuffled;
        shuffled.set_sense(src.sense());
        shuffled.set_objective_constant(src.objective_constant());
        for (std::size_t j = 0; j < perm.size(); ++j) {
            const auto &v = src.variable(perm[j]);
            where[static_cast<std::size_t>(perm[j])] = shuffled.add_variable(v.name, v.lower, v.upper, v.cost);
        }
        std::vector<int> rows(static_cast<std::size_t>(src.num_constraints()));
        for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = static_cast<int>(r);
        std::shuffle(rows.begin(), rows.end(), rng);
        for (int r : rows) {
            const auto &c = src.constraint(r);
            std::vector<lp::Term> terms;
            for (const auto &t : c.terms) terms.push_back({where[static_cast<std::size_t>(t.var)], t.coef});
            shuffled.add_constraint(c.name, terms, c.lower, c.upper);
        }
        const lp::Solution s = lp::solve(shuffled);
        REQUIRE(s.optimal());
        CHECK(s.objective == doctest::Approx(base.objective).epsilon(1e-9));
    }
}

TEST_CASE("verifier catches injected faults") {
    GeneratorParams p;
    p.n_tasks = 16;
    p.seed = 8;
    const TaskGraph g = normalize_source(generate_random_graph(p));
    Platform pf;
    const EpsilonStar es = compute_epsilon_star(g, pf);
    REQUIRE(es.feasible);
    const ProposedPlan plan = plan_proposed(g, pf);
    const double eps = 0.85 * es.energy;
    const RunResult run = run_proposed(plan, pf, eps);
    REQUIRE(run.feasible);
    const Schedule good = *run.schedule;
    auto check = [&](const Schedule &s, const Assignment &a, double budget) {
        return verify_schedule(g, s, a, pf.power, pf.freqs, budget, g.deadline(), run.contract);
    };
    const auto ok = check(good, good.assignment, eps);
    REQUIRE(ok.ok());
    const auto *energy = ok.find("energy");
    REQUIRE(energy != nullptr);
    CHECK(energy->margin == doctest::Approx(eps - good.total_energy(pf.power, pf.freqs)).epsilon(1e-9));
    CHECK(ok.qos == doctest::Approx(good.qos(g)));
    for (const auto &c : ok.checks) {
        INFO(c.name, " ", c.detail);
        if (c.name == "workload") {
            // Equality rows: the margin is minus the residual, in cycles.
            CHECK(c.margin >= -1e-7 * 4e6);
        } else {
            CHECK(c.margin >= -1e-12);
        }
    }

    // Start of a child pulled 1 ms before its parent's finish.
    const Edge e = g.edges()[g.edges().size() / 2];
    Schedule s1 = good;
    s1.start[e.dst] = std::max(0.0, good.finish(e.src, pf.freqs) + e.comm - 1e-3);
    CHECK(fails_check(check(s1, good.assignment, eps), "precedence"));

    // Missing cycles on a non-exit task.
    TaskIndex inner = 0;
    while (g.is_exit(inner) || g.task(inner).initial_workload() < 10) ++inner;
    Schedule s2 = good;
    for (auto &c : s2.cycles[inner]) c *= 0.9;
    CHECK(fails_check(check(s2, good.assignment, eps), "workload"));

    // Budget below the consumed energy.
    CHECK(fails_check(check(good, good.assignment, 0.98 * good.total_energy(pf.power, pf.freqs)), "energy"));

    // Finish beyond the deadline.
    const TaskIndex exit_task = g.exits().front();
    Schedule s3 = good;
    s3.start[exit_task] = g.deadline();
    CHECK(fails_check(check(s3, good.assignment, eps), "deadline"));

    // Two tasks on one processor sharing a start time.
    for (const auto &seq : good.assignment.order) {
        if (seq.size() < 2) continue;
        Schedule s4 = good;
        s4.start[seq[1]] = s4.start[seq[0]];
        CHECK(fails_check(check(s4, good.assignment, eps), "non_overlap"));
        break;
    }

    // Negative cycles.
    Schedule s5 = good;
    s5.cycles[exit_task][0] = -5.0;
    CHECK(fails_check(check(s5, good.assignment, eps), "nonnegativity"));

    // Optional work beyond O on an exit.
    Schedule s6 = good;
    s6.optional_cycles[exit_task] = static_cast<double>(g.task(exit_task).optional) * 1.5;
    CHECK(fails_check(check(s6, good.assignment, eps), "optional_range"));

    // Assignment that drops a task.
    Assignment bad = good.assignment;
    for (auto &seq : bad.order) {
        if (!seq.empty()) {
            seq.pop_back();
            break;
        }
    }
    CHECK(fails_check(check(good, bad, eps), "assignment"));

    // Frequency split shifted to faster levels: energy rises past the budget.
    Schedule s7 = good;
    for (TaskIndex u = 0; u < g.size(); ++u) {
        double total = 0.0;
        for (double c : s7.cycles[u]) total += c;
        for (auto &c : s7.cycles[u]) c = 0.0;
        s7.cycles[u].back() = total;
    }
    CHECK(fails_check(check(s7, good.assignment, s7.total_energy(pf.power, pf.freqs) * 0.999), "energy"));

    // Wrong shape.
    Schedule s8 = good;
    s8.cycles[0].pop_back();
    CHECK(fails_check(check(s8, good.assignment, eps), "shape"));
}

TEST_CASE("schedule text round trip") {
    GeneratorParams p;
    p.n_tasks = 12;
    p.seed = 2;
    const TaskGraph g = normalize_source(generate_random_graph(p));
    Platform pf;
    const EpsilonStar es = compute_epsilon_star(g, pf);
    const ProposedPlan plan = plan_proposed(g, pf);
    const RunResult run = run_proposed(plan, pf, 0.9 * es.energy);
    REQUIRE(run.feasible);
    ScheduleHeader h;
    h.method = "proposed";
    h.contract = run.contract;
    h.deadline = g.deadline();
    h.eps_max = 0.9 * es.energy;
    h.frequencies.assign(pf.freqs.values().begin(), pf.freqs.values().end());
    std::stringstream ss;
    write_schedule(ss, g, *run.schedule, h);
    ScheduleHeader back;
    const Schedule s = read_schedule(ss, g, back);
    CHECK(back.method == "proposed");
    CHECK(back.contract.kind == h.contract.kind);
    CHECK(back.contract.workloads == h.contract.workloads);
    CHECK(back.eps_max == h.eps_max);
    CHECK(back.frequencies == h.frequencies);
    CHECK(s.assignment == run.schedule->assignment);
    CHECK(s.start == run.schedule->start);
    CHECK(s.cycles == run.schedule->cycles);
    const auto rep = verify_schedule(g, s, s.assignment, pf.power, pf.freqs, back.eps_max, back.deadline, back.contract);
    CHECK(rep.ok());

    std::istringstream junk("schedule v2\n");
    CHECK_THROWS(read_schedule(junk, g, back));
}
