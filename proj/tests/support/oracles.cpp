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

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "support/reference_simplex.hpp"

namespace impsched::testing {

namespace {

std::string task_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "t%02zu", i);
    return buf;
}

Task random_task(std::mt19937_64 &rng, std::string id, Cycles mean_workload) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto w = static_cast<Cycles>(std::llround(mean_workload * (0.5 + unit(rng))));
    Task t;
    t.id = std::move(id);
    t.mandatory = static_cast<Cycles>(std::llround(w * (0.2 + 0.6 * unit(rng))));
    t.optional = std::max<Cycles>(2, w - t.mandatory);
    t.extension = static_cast<Cycles>(std::llround(2.0 * t.mandatory * unit(rng)));
    t.precision_threshold = unit(rng);
    return t;
}

double random_comm(std::mt19937_64 &rng) { return std::uniform_real_distribution<double>(0.4e-3, 0.6e-3)(rng); }

}  // namespace

BruteForceLabeling brute_force_labeling(const TaskGraph &g) {
    std::vector<TaskIndex> free_tasks;
    std::vector<std::optional<bool>> precise(g.size());
    for (TaskIndex u = 0; u < g.size(); ++u) {
        if (g.is_exit(u)) continue;
        if (is_labelable(g, u)) {
            free_tasks.push_back(u);
        } else {
            precise[u] = true;
        }
    }
    if (free_tasks.size() > 20) throw std::invalid_argument("brute_force_labeling: too many tasks");
    BruteForceLabeling out;
    out.best = std::numeric_limits<Cycles>::max();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_tasks.size()); ++mask) {
        for (std::size_t b = 0; b < free_tasks.size(); ++b) precise[free_tasks[b]] = ((mask >> b) & 1) == 0;
        const Labeling lab = make_labeling(g, precise);
        const Cycles obj = reduction_objective(g, lab);
        ++out.evaluated;
        if (obj < out.best) {
            out.best = obj;
            out.labeling = lab;
        }
    }
    return out;
}

TaskGraph fork_instance(std::mt19937_64 &rng, std::size_t children) {
    TaskGraph g;
    std::uniform_int_distribution<Cycles> opt(100000, 2000000);
    Task p = random_task(rng, "p", 2000000);
    p.optional = opt(rng);
    const TaskIndex pi = g.add_task(p);
    for (std::size_t i = 0; i < children; ++i) {
        Task c = random_task(rng, "c" + task_name(i), 2000000);
        // Spread the extensions so both decisions occur.
        c.extension = std::uniform_int_distribution<Cycles>(0, 2 * p.optional / static_cast<Cycles>(children))(rng);
        g.add_edge(pi, g.add_task(c), random_comm(rng));
    }
    g.set_deadline(compute_deadline(g, 2.1e9));
    return g;
}

TaskGraph join_instance(std::mt19937_64 &rng, std::size_t parents) {
    TaskGraph g;
    Task c = random_task(rng, "child", 2000000);
    std::vector<TaskIndex> ps;
    Cycles total_optional = 0;
    for (std::size_t i = 0; i < parents; ++i) {
        Task p = random_task(rng, "p" + task_name(i), 2000000 / static_cast<Cycles>(parents) + 200000);
        total_optional += p.optional;
        ps.push_back(g.add_task(p));
    }
    c.extension = std::uniform_int_distribution<Cycles>(0, 2 * total_optional)(rng);
    const TaskIndex ci = g.add_task(c);
    for (TaskIndex p : ps) g.add_edge(p, ci, random_comm(rng));
    g.set_deadline(compute_deadline(g, 2.1e9));
    return normalize_source(g);
}

TaskGraph random_dag(std::mt19937_64 &rng, std::size_t n, double p, Cycles mean_workload) {
    TaskGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_task(random_task(rng, task_name(i), mean_workload));
    std::bernoulli_distribution edge(p);
    for (std::size_t j = 1; j < n; ++j) {
        bool has_parent = false;
        for (std::size_t i = 0; i < j; ++i) {
            if (edge(rng)) {
                g.add_edge(i, j, random_comm(rng));
                has_parent = true;
            }
        }
        if (!has_parent) {
            const auto i = std::uniform_int_distribution<std::size_t>(0, j - 1)(rng);
            g.add_edge(i, j, random_comm(rng));
        }
    }
    g.set_deadline(compute_deadline(g, 2.1e9));
    return g;
}

namespace {

// Units inside the configuration LPs: mega-cycles, milliseconds, millijoules.
constexpr double kMega = 1e6;

class Enumerator {
  public:
    Enumerator(const TaskGraph &g, std::size_t k, const PowerModel &pm, const FrequencySet &fs, double eps_max,
               double deadline)
        : g_(g), k_(k), fs_(fs), eps_mj_(eps_max * 1e3), deadline_ms_(deadline * 1e3), reach_(descendants(g)) {
        for (std::size_t i = 0; i < fs.size(); ++i) {
            eps_per_mcycle_.push_back(energy_per_cycle(pm, fs[i]) * kMega * 1e3);
            ms_per_mcycle_.push_back(kMega / fs[i] * 1e3);
        }
        for (TaskIndex u = 0; u < g.size(); ++u) {
            if (g.parents(u).size() >= 2 && g.task(u).extension > 0) clamped_.push_back(u);
        }
    }

    ExhaustiveResult run() {
        proc_of_.assign(g_.size(), 0);
        assign(0);
        return best_;
    }

  private:
    void assign(TaskIndex u) {
        if (u == g_.size()) {
            std::vector<std::vector<TaskIndex>> seqs(k_);
            for (TaskIndex v = 0; v < g_.size(); ++v) seqs[proc_of_[v]].push_back(v);
            orders_.assign(k_, {});
            order(seqs, 0);
            return;
        }
        for (std::size_t k = 0; k < k_; ++k) {
            proc_of_[u] = k;
            assign(u + 1);
        }
    }

    // Permutations of each processor's tasks that never put a descendant
    // before its ancestor; those are infeasible with positive durations.
    void order(std::vector<std::vector<TaskIndex>> &seqs, std::size_t k) {
        if (k == k_) {
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << clamped_.size()); ++mask) solve(mask);
            return;
        }
        std::vector<TaskIndex> perm = seqs[k];
        std::sort(perm.begin(), perm.end());
        do {
            bool ok = true;
            for (std::size_t a = 0; a < perm.size() && ok; ++a) {
                for (std::size_t b = a + 1; b < perm.size() && ok; ++b) ok = !reach_[perm[b]][perm[a]];
            }
            if (!ok) continue;
            orders_[k] = perm;
            order(seqs, k + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    void solve(std::uint64_t clamp_mask) {
        ++best_.configurations;
        lp::LinearProgram prog;
        prog.set_sense(lp::Sense::maximize);
        const std::size_t n = g_.size();
        std::vector<int> s(n), o(n);
        std::vector<std::vector<int>> cyc(n);
        const auto exits = g_.exits();
        double constant = 0.0;
        for (TaskIndex u = 0; u < n; ++u) {
            const Task &t = g_.task(u);
            s[u] = prog.add_variable("s" + std::to_string(u), 0.0, deadline_ms_);
            for (std::size_t i = 0; i < fs_.size(); ++i) {
                cyc[u].push_back(prog.add_variable("n" + std::to_string(u) + "_" + std::to_string(i), 0.0, lp::kInf));
            }
            const double O = static_cast<double>(t.optional) / kMega;
            double lo = 0.0;
            if (!g_.is_exit(u) && !is_labelable(g_, u)) lo = O;
            double cost = 0.0;
            if (g_.is_exit(u)) {
                cost = (1.0 - t.precision_threshold) / O / static_cast<double>(exits.size());
                constant += t.precision_threshold / static_cast<double>(exits.size());
            }
            o[u] = prog.add_variable("o" + std::to_string(u), lo, O, cost);
        }
        prog.set_objective_constant(constant);

        for (TaskIndex u = 0; u < n; ++u) {
            const Task &t = g_.task(u);
            const double m = static_cast<double>(t.extension) / kMega;
            std::vector<lp::Term> row;
            for (int c : cyc[u]) row.push_back({c, 1.0});
            row.push_back({o[u], -1.0});
            double rhs = static_cast<double>(t.mandatory) / kMega;
            const auto parents = g_.parents(u);
            const auto pos = std::find(clamped_.begin(), clamped_.end(), u);
            const bool clamped = pos != clamped_.end() && ((clamp_mask >> (pos - clamped_.begin())) & 1);
            if (m > 0.0 && !parents.empty()) {
                if (clamped) {
                    rhs += m;
                    // Parent error sum at least one.
                    std::vector<lp::Term> sum;
                    for (const auto &p : parents) sum.push_back({o[p.task], -kMega / static_cast<double>(g_.task(p.task).optional)});
                    prog.add_ge("clamp" + std::to_string(u), sum, 1.0 - static_cast<double>(parents.size()));
                } else {
                    rhs += m * static_cast<double>(parents.size());
                    std::vector<lp::Term> sum;
                    for (const auto &p : parents) {
                        const double inv_o = kMega / static_cast<double>(g_.task(p.task).optional);
                        row.push_back({o[p.task], m * inv_o});
                        sum.push_back({o[p.task], -inv_o});
                    }
                    if (parents.size() >= 2) prog.add_le("clamp" + std::to_string(u), sum, 1.0 - static_cast<double>(parents.size()));
                }
            }
            prog.add_eq("work" + std::to_string(u), row, rhs);
        }

        std::vector<lp::Term> energy;
        for (TaskIndex u = 0; u < n; ++u) {
            for (std::size_t i = 0; i < fs_.size(); ++i) energy.push_back({cyc[u][i], eps_per_mcycle_[i]});
        }
        prog.add_le("energy", energy, eps_mj_);

        auto finish_terms = [&](TaskIndex u) {
            std::vector<lp::Term> t{{s[u], 1.0}};
            for (std::size_t i = 0; i < fs_.size(); ++i) t.push_back({cyc[u][i], ms_per_mcycle_[i]});
            return t;
        };
        for (TaskIndex u = 0; u < n; ++u) prog.add_le("deadline" + std::to_string(u), finish_terms(u), deadline_ms_);
        for (const Edge &e : g_.edges()) {
            auto t = finish_terms(e.src);
            t.push_back({s[e.dst], -1.0});
            prog.add_le("prec", t, -e.comm * 1e3);
        }
        for (const auto &seq : orders_) {
            for (std::size_t a = 0; a + 1 < seq.size(); ++a) {
                auto t = finish_terms(seq[a]);
                t.push_back({s[seq[a + 1]], -1.0});
                prog.add_le("seq", t, 0.0);
            }
        }

        const RefSolution sol = reference_solve(prog);
        if (sol.status != RefStatus::optimal) return;
        if (!best_.feasible || sol.objective > best_.qos) {
            best_.feasible = true;
            best_.qos = sol.objective;
        }
    }

    const TaskGraph &g_;
    std::size_t k_;
    const FrequencySet &fs_;
    double eps_mj_;
    double deadline_ms_;
    std::vector<std::vector<bool>> reach_;
    std::vector<double> eps_per_mcycle_, ms_per_mcycle_;
    std::vector<TaskIndex> clamped_;
    std::vector<std::size_t> proc_of_;
    std::vector<std::vector<TaskIndex>> orders_;
    ExhaustiveResult best_;
};

}  // namespace

ExhaustiveResult exhaustive_optimum(const TaskGraph &g, std::size_t processors, const PowerModel &pm,
                                    const FrequencySet &fs, double eps_max, double deadline) {
    for (TaskIndex u = 0; u < g.size(); ++u) {
        if (g.task(u).mandatory <= 0 && (g.is_exit(u) || is_labelable(g, u))) throw std::invalid_argument("exhaustive_optimum: needs positive mandatory work");
    }
    return Enumerator(g, processors, pm, fs, eps_max, deadline).run();
}

}  // namespace impsched::testing
