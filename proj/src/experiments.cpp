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

#include "impsched/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace impsched {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Shared tail of the LP-based methods.
RunResult finish_lp_run(const TaskGraph &g, const Platform &pf, const ScheduleProgram &prog, double eps_max,
                        Clock::time_point t0, double prep_time) {
    RunResult r;
    r.contract = prog.contract;
    const lp::Solution sol = lp::solve(prog.lp);
    r.status = std::string(lp::to_string(sol.status));
    if (sol.optimal()) {
        Schedule s = extract_schedule(prog, sol);
        auto rep = verify_schedule(g, s, prog.assignment, pf.power, pf.freqs, eps_max, g.deadline(), prog.contract);
        r.verified = rep.ok();
        r.feasible = r.verified;
        if (!r.verified) {
            r.numerical_failure = true;
            r.status = "verify_failed";
        }
        r.qos = rep.qos;
        r.energy = rep.energy;
        r.makespan = rep.makespan;
        r.report = std::move(rep);
        r.schedule = std::move(s);
    } else if (sol.status != lp::Status::infeasible) {
        r.numerical_failure = true;
    }
    r.runtime = seconds_since(t0) + prep_time;
    return r;
}

}  // namespace

HeftOptions heft_options(const SweepSettings &s) { return HeftOptions{s.insertion, s.lp_comm}; }

EpsilonStar compute_epsilon_star(const TaskGraph &g, const Platform &pf, const HeftOptions &heft) {
    const auto t0 = Clock::now();
    const TaskGraph gn = normalize_source(g);
    EpsilonStar out;
    const auto wl = initial_workloads(gn);
    out.assignment = heft_assign(gn, wl, pf.processors, pf.freqs.max(), heft);
    const ScheduleProgram prog = build_min_energy_lp(gn, out.assignment, pf.power, pf.freqs, gn.deadline());
    const lp::Solution sol = lp::solve(prog.lp);
    if (sol.optimal()) {
        out.energy = objective_in_si(prog, sol);
        Schedule s = extract_schedule(prog, sol);
        out.report = verify_schedule(gn, s, out.assignment, pf.power, pf.freqs, out.energy, gn.deadline(),
                                     prog.contract);
        out.feasible = out.report->ok();
        out.schedule = std::move(s);
    }
    out.runtime = seconds_since(t0);
    return out;
}

ProposedPlan plan_proposed(const TaskGraph &g, const Platform &pf, const HeftOptions &heft) {
    const auto t0 = Clock::now();
    ProposedPlan p{normalize_source(g), {}, {}, 0.0};
    p.labels = imp_label(p.graph);
    const auto wl = scheduling_workloads(p.graph, p.labels.workloads);
    p.assignment = heft_assign(p.graph, wl, pf.processors, pf.freqs.max(), heft);
    p.prep_time = seconds_since(t0);
    return p;
}

RunResult run_proposed(const ProposedPlan &plan, const Platform &pf, double eps_max) {
    const auto t0 = Clock::now();
    const auto prog = build_qos_lp(plan.graph, plan.labels.workloads, plan.assignment, pf.power, pf.freqs, eps_max,
                                   plan.graph.deadline());
    return finish_lp_run(plan.graph, pf, prog, eps_max, t0, plan.prep_time);
}

BaselinePlan plan_baseline(const TaskGraph &g, const Platform &pf, const HeftOptions &heft) {
    const auto t0 = Clock::now();
    BaselinePlan p{normalize_source(g), {}, 0.0};
    p.assignment = heft_assign(p.graph, initial_workloads(p.graph), pf.processors, pf.freqs.max(), heft);
    p.prep_time = seconds_since(t0);
    return p;
}

RunResult run_baseline(const BaselinePlan &plan, const Platform &pf, double eps_max) {
    const auto t0 = Clock::now();
    const auto prog = build_baseline_lp(plan.graph, plan.assignment, pf.power, pf.freqs, eps_max, plan.graph.deadline());
    return finish_lp_run(plan.graph, pf, prog, eps_max, t0, plan.prep_time);
}

RunResult run_milp(const TaskGraph &g, const Platform &pf, double eps_max, const BnbOptions &opts) {
    const auto t0 = Clock::now();
    const TaskGraph gn = normalize_source(g);
    const MilpModel model = build_milp(gn, pf.processors, pf.freqs, pf.power, eps_max, gn.deadline());
    BnbResult res = solve_branch_and_bound(model, gn, pf.power, pf.freqs, opts);
    RunResult r;
    r.contract = {ContractKind::input_error, {}};
    r.status = std::string(to_string(res.status));
    r.nodes = res.nodes;
    if (res.schedule) {
        r.gap = res.gap();
        auto rep = verify_schedule(gn, *res.schedule, res.schedule->assignment, pf.power, pf.freqs, eps_max,
                                   gn.deadline(), r.contract);
        r.verified = rep.ok();
        r.feasible = r.verified;
        if (!r.verified) {
            r.numerical_failure = true;
            r.status = "verify_failed";
        }
        r.qos = rep.qos;
        r.energy = rep.energy;
        r.makespan = rep.makespan;
        r.report = std::move(rep);
        r.schedule = std::move(res.schedule);
    }
    r.runtime = seconds_since(t0);
    return r;
}

std::vector<double> sweep_ratios(double resolution) {
    if (!(resolution > 0.0 && resolution < 1.0)) throw std::invalid_argument("resolution must lie in (0, 1)");
    std::vector<double> out;
    for (std::size_t k = 0;; ++k) {
        const double r = std::round((1.0 - static_cast<double>(k) * resolution) * 1e12) / 1e12;
        if (r <= 1e-9) break;
        out.push_back(r);
    }
    return out;
}

SweepOutcome run_sweep(const std::string &graph_id, const TaskGraph &g, const Config &cfg) {
    SweepOutcome out;
    const Platform &pf = cfg.platform;
    const HeftOptions heft = heft_options(cfg.sweep);
    const EpsilonStar es = compute_epsilon_star(g, pf, heft);
    const auto &methods = cfg.sweep.methods;
    std::vector<std::vector<SweepRow>> per_method(methods.size());

    if (!es.feasible) {
        for (std::size_t i = 0; i < methods.size(); ++i) {
            SweepRow row{graph_id, methods[i], 1.0, {}};
            row.result.status = "eps_star_infeasible";
            per_method[i].push_back(std::move(row));
        }
    } else {
        out.epsilon_star = es.energy;
        const auto ratios = sweep_ratios(cfg.sweep.resolution);
        auto walk = [&](std::size_t mi) {
            const Method m = methods[mi];
            std::optional<ProposedPlan> pp;
            std::optional<BaselinePlan> bp;
            if (m == Method::proposed) pp = plan_proposed(g, pf, heft);
            if (m == Method::baseline) bp = plan_baseline(g, pf, heft);
            BnbOptions bnb;
            bnb.time_limit = cfg.sweep.time_limit;
            std::optional<std::size_t> first_infeasible;
            for (std::size_t k = 0; k < ratios.size(); ++k) {
                if (first_infeasible && k > *first_infeasible + cfg.sweep.points_past_infeasible) break;
                const double eps = ratios[k] * es.energy;
                SweepRow row{graph_id, m, ratios[k], {}};
                switch (m) {
                case Method::proposed: row.result = run_proposed(*pp, pf, eps); break;
                case Method::baseline: row.result = run_baseline(*bp, pf, eps); break;
                case Method::milp: row.result = run_milp(g, pf, eps, bnb); break;
                }
                if (!row.result.feasible && !first_infeasible) first_infeasible = k;
                per_method[mi].push_back(std::move(row));
            }
        };
        const std::size_t jobs = std::min<std::size_t>(cfg.sweep.jobs, methods.size());
        if (jobs <= 1) {
            for (std::size_t i = 0; i < methods.size(); ++i) walk(i);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            for (std::size_t j = 0; j < jobs; ++j) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < methods.size(); i = next++) walk(i);
                });
            }
            for (auto &t : pool) t.join();
        }
    }
    for (auto &rows : per_method) {
        for (auto &r : rows) out.rows.push_back(std::move(r));
    }
    return out;
}

void write_csv_row(std::ostream &os, const SweepRow &row) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string(buf);
    };
    const RunResult &r = row.result;
    std::snprintf(buf, sizeof buf, "%.6g", row.eps_ratio);
    os << row.graph << "," << to_string(row.method) << "," << buf << "," << (r.feasible ? 1 : 0) << ",";
    if (r.feasible) {
        os << num(r.qos) << "," << num(r.energy) << "," << num(r.makespan);
    } else {
        os << ",,";
    }
    os << "," << num(r.runtime) << ",";
    if (r.gap && std::isfinite(*r.gap)) os << num(*r.gap);
    os << ",";
    if (r.nodes) os << *r.nodes;
    os << "\n";
}

}  // namespace impsched
