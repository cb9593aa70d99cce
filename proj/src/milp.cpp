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

#include "impsched/milp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace impsched {

std::array<int, 3> linearize_product(lp::LinearProgram &lp, int z, int x, const AffineExpr &y, double upper,
                                     const std::string &name) {
    if (!std::isfinite(upper) || !(upper > 0.0)) {
        throw std::invalid_argument("linearize_product: factor needs a finite positive upper bound");
    }
    const auto &zv = lp.variable(z);
    lp.set_bounds(z, std::max(0.0, zv.lower), zv.upper);

    std::array<int, 3> rows{};
    rows[0] = lp.add_le(name + "_ux", {{z, 1.0}, {x, -upper}}, 0.0);

    std::vector<lp::Term> t{{z, 1.0}};
    for (const auto &term : y.terms) t.push_back({term.var, -term.coef});
    rows[1] = lp.add_le(name + "_uy", t, y.constant);

    t.push_back({x, -upper});
    rows[2] = lp.add_ge(name + "_ly", std::move(t), y.constant - upper);
    return rows;
}

MilpModel build_milp(const TaskGraph &g, std::size_t processors, const FrequencySet &fs, const PowerModel &pm,
                     double eps_max, double deadline, const MilpOptions &opts) {
    if (g.empty()) throw std::invalid_argument("build_milp: empty graph");
    if (processors < 1) throw std::invalid_argument("build_milp: need at least one processor");
    if (!(deadline > 0.0)) throw std::invalid_argument("build_milp: deadline must be positive");
    if (!is_normalized(g)) throw GraphError("build_milp: graph must have a single source");
    pm.validate();

    MilpModel md;
    auto &lp = md.lp;
    const std::size_t n = g.size();
    const std::size_t nf = fs.size();
    const std::size_t K = processors;
    md.processors = K;
    md.tasks = n;
    md.deadline = deadline;
    md.eps_max = eps_max;

    const double horizon = deadline / kSecondsPerUnit;
    std::vector<double> ms_per_unit(nf), mj_per_unit(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        ms_per_unit[i] = kCyclesPerUnit / fs[i] / kSecondsPerUnit;
        mj_per_unit[i] = kCyclesPerUnit * energy_per_cycle(pm, fs[i]) / kJoulesPerUnit;
    }
    const auto reach = descendants(g);
    const TaskIndex source = g.sources().front();
    auto mc = [](Cycles c) { return static_cast<double>(c) / kCyclesPerUnit; };

    // Assignment.
    md.assign_var.assign(K, std::vector<int>(n, -1));
    for (std::size_t k = 0; k < K; ++k) {
        for (TaskIndex u = 0; u < n; ++u) {
            const int v = lp.add_variable("P_" + std::to_string(k) + "_" + g.task(u).id, 0.0, 1.0);
            lp.set_integer(v);
            if (opts.break_symmetry && u == source) lp.set_bounds(v, k == 0 ? 1.0 : 0.0, k == 0 ? 1.0 : 0.0);
            md.assign_var[k][u] = v;
            md.binaries.push_back(v);
            md.binary_kind.push_back(BinaryKind::assignment);
        }
    }
    // Immediate order, with index n as the virtual start/end.
    md.order_var.assign(K, std::vector<std::vector<int>>(n + 1, std::vector<int>(n + 1, -1)));
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t a = 0; a <= n; ++a) {
            for (std::size_t b = 0; b <= n; ++b) {
                if (a == b && a < n) continue;
                if (a < n && b < n && opts.fix_ancestor_order && reach[b][a]) continue;
                const std::string an = a == n ? "start" : g.task(a).id;
                const std::string bn = b == n ? "end" : g.task(b).id;
                const int v = lp.add_variable("Y_" + std::to_string(k) + "_" + an + "_" + bn, 0.0, 1.0);
                lp.set_integer(v);
                md.order_var[k][a][b] = v;
                md.binaries.push_back(v);
                md.binary_kind.push_back(BinaryKind::ordering);
            }
        }
    }

    md.start_var.resize(n);
    md.cycle_var.assign(n, std::vector<int>(nf, -1));
    md.optional_var.resize(n);
    md.clamp_var.assign(n, -1);
    md.product_var.assign(n, -1);
    const auto exits = g.exits();
    const double w = 1.0 / static_cast<double>(exits.size());
    double constant = 0.0;
    for (TaskIndex u = 0; u < n; ++u) {
        const Task &t = g.task(u);
        md.start_var[u] = lp.add_variable("S_" + t.id, 0.0, lp::kInf);
        for (std::size_t i = 0; i < nf; ++i) {
            md.cycle_var[u][i] = lp.add_variable("N_" + t.id + "_" + std::to_string(i), 0.0, lp::kInf);
        }
        md.optional_var[u] = lp.add_variable("o_" + t.id, 0.0, mc(t.optional));
        if (!is_labelable(g, u) && !g.is_exit(u)) lp.set_bounds(md.optional_var[u], mc(t.optional), mc(t.optional));
        if (g.is_exit(u)) {
            constant += w * t.precision_threshold;
            lp.set_cost(md.optional_var[u], w * (1.0 - t.precision_threshold) / mc(t.optional));
        }
    }
    for (TaskIndex u = 0; u < n; ++u) {
        if (g.parents(u).size() < 2 || g.task(u).extension == 0) continue;
        md.clamp_var[u] = lp.add_variable("X_" + g.task(u).id, 0.0, 1.0);
        lp.set_integer(md.clamp_var[u]);
        md.binaries.push_back(md.clamp_var[u]);
        md.binary_kind.push_back(BinaryKind::clamp);
        md.product_var[u] = lp.add_variable("Z_" + g.task(u).id, 0.0, static_cast<double>(g.parents(u).size()));
    }
    lp.set_sense(lp::Sense::maximize);
    lp.set_objective_constant(constant);

    for (TaskIndex u = 0; u < n; ++u) {
        std::vector<lp::Term> t;
        for (std::size_t k = 0; k < K; ++k) t.push_back({md.assign_var[k][u], 1.0});
        lp.add_eq("assign_" + g.task(u).id, std::move(t), 1.0);
    }
    for (std::size_t k = 0; k < K; ++k) {
        const std::string ks = std::to_string(k);
        for (std::size_t a = 0; a <= n; ++a) {
            std::vector<lp::Term> out, in;
            for (std::size_t b = 0; b <= n; ++b) {
                if (md.order_var[k][a][b] >= 0) out.push_back({md.order_var[k][a][b], 1.0});
                if (md.order_var[k][b][a] >= 0) in.push_back({md.order_var[k][b][a], 1.0});
            }
            if (a == n) {
                lp.add_eq("succ_" + ks + "_start", std::move(out), 1.0);
                lp.add_eq("pred_" + ks + "_end", std::move(in), 1.0);
            } else {
                out.push_back({md.assign_var[k][a], -1.0});
                in.push_back({md.assign_var[k][a], -1.0});
                lp.add_eq("succ_" + ks + "_" + g.task(a).id, std::move(out), 0.0);
                lp.add_eq("pred_" + ks + "_" + g.task(a).id, std::move(in), 0.0);
            }
        }
    }

    auto finish_terms = [&](TaskIndex u) {
        std::vector<lp::Term> t{{md.start_var[u], 1.0}};
        for (std::size_t i = 0; i < nf; ++i) t.push_back({md.cycle_var[u][i], ms_per_unit[i]});
        return t;
    };

    // Workload: sum N = M + m * E^i + o, with E^i linear in the parents' o.
    for (TaskIndex u = 0; u < n; ++u) {
        const Task &t = g.task(u);
        std::vector<lp::Term> row;
        for (std::size_t i = 0; i < nf; ++i) row.push_back({md.cycle_var[u][i], 1.0});
        row.push_back({md.optional_var[u], -1.0});
        double rhs = mc(t.mandatory);
        const auto parents = g.parents(u);
        const double m_u = mc(t.extension);
        if (parents.size() == 1) {
            const TaskIndex p = parents[0].task;
            rhs += m_u;
            if (m_u != 0.0) row.push_back({md.optional_var[p], m_u / mc(g.task(p).optional)});
        } else if (md.clamp_var[u] >= 0) {
            const double b = static_cast<double>(parents.size());
            AffineExpr sum_err;
            sum_err.constant = b;
            for (const Adjacent &p : parents) {
                sum_err.terms.push_back({md.optional_var[p.task], -1.0 / mc(g.task(p.task).optional)});
            }
            const int x = md.clamp_var[u], z = md.product_var[u];
            // E^i = X + S - Z
            rhs += m_u * b;
            if (m_u != 0.0) {
                row.push_back({x, -m_u});
                row.push_back({z, m_u});
                for (const auto &term : sum_err.terms) row.push_back({term.var, -m_u * term.coef});
            }
            // S lies in [0, b], so b is the tightest constant for both rows.
            linearize_product(lp, z, x, sum_err, b, "prod_" + t.id);
            // (S - 1) / (b - 1) <= X <= S
            std::vector<lp::Term> lo{{x, b - 1.0}}, hi{{x, 1.0}};
            for (const auto &term : sum_err.terms) {
                lo.push_back({term.var, -term.coef});
                hi.push_back({term.var, -term.coef});
            }
            lp.add_ge("clamp_lo_" + t.id, std::move(lo), b - 1.0);
            lp.add_le("clamp_hi_" + t.id, std::move(hi), b);
        }
        lp.add_eq("work_" + t.id, std::move(row), rhs);
    }

    {
        std::vector<lp::Term> t;
        for (TaskIndex u = 0; u < n; ++u) {
            for (std::size_t i = 0; i < nf; ++i) t.push_back({md.cycle_var[u][i], mj_per_unit[i]});
        }
        md.energy_row = lp.add_le("energy", std::move(t), eps_max / kJoulesPerUnit);
    }
    for (TaskIndex u = 0; u < n; ++u) lp.add_le("deadline_" + g.task(u).id, finish_terms(u), horizon);
    for (const Edge &e : g.edges()) {
        auto t = finish_terms(e.src);
        t.push_back({md.start_var[e.dst], -1.0});
        lp.add_le("prec_" + g.task(e.src).id + "_" + g.task(e.dst).id, std::move(t), -e.comm / kSecondsPerUnit);
    }
    // Big-M non-overlap; rows implied by a precedence path are left out.
    for (std::size_t k = 0; k < K; ++k) {
        for (TaskIndex u = 0; u < n; ++u) {
            for (TaskIndex v = 0; v < n; ++v) {
                const int y = md.order_var[k][u][v];
                if (y < 0 || reach[u][v]) continue;
                auto t = finish_terms(u);
                t.push_back({md.start_var[v], -1.0});
                t.push_back({y, horizon});
                lp.add_le("order_" + std::to_string(k) + "_" + g.task(u).id + "_" + g.task(v).id, std::move(t),
                          horizon);
            }
        }
    }
    return md;
}

std::vector<std::size_t> decode_processors(const MilpModel &md, std::span<const double> x) {
    std::vector<std::size_t> proc(md.tasks, 0);
    for (std::size_t u = 0; u < md.tasks; ++u) {
        double best = -1.0;
        for (std::size_t k = 0; k < md.processors; ++k) {
            const double v = x[md.assign_var[k][u]];
            if (v > best) {
                best = v;
                proc[u] = k;
            }
        }
    }
    return proc;
}

std::optional<Assignment> decode_order(const MilpModel &md, std::span<const double> x) {
    const std::size_t n = md.tasks;
    Assignment a;
    a.proc_of = decode_processors(md, x);
    a.order.assign(md.processors, {});
    for (std::size_t k = 0; k < md.processors; ++k) {
        std::vector<bool> visited(n, false);
        std::size_t cur = n;
        while (true) {
            std::size_t next = n + 1;
            for (std::size_t b = 0; b <= n; ++b) {
                const int v = md.order_var[k][cur][b];
                if (v >= 0 && x[v] > 0.5) {
                    if (next != n + 1) return std::nullopt;  // two successors
                    next = b;
                }
            }
            if (next == n + 1) return std::nullopt;
            if (next == n) break;
            if (visited[next] || a.proc_of[next] != k) return std::nullopt;
            visited[next] = true;
            a.order[k].push_back(next);
            cur = next;
        }
        for (std::size_t u = 0; u < n; ++u) {
            if (a.proc_of[u] == k && !visited[u]) return std::nullopt;
        }
    }
    return a;
}

Schedule extract_milp_schedule(const MilpModel &md, std::span<const double> x, const Assignment &asg) {
    Schedule s;
    s.assignment = asg;
    const std::size_t n = md.tasks;
    s.start.resize(n);
    s.cycles.assign(n, {});
    s.optional_cycles.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        s.start[u] = std::max(0.0, x[md.start_var[u]]) * kSecondsPerUnit;
        for (int v : md.cycle_var[u]) s.cycles[u].push_back(std::max(0.0, x[v]) * kCyclesPerUnit);
        const auto &ov = md.lp.variable(md.optional_var[u]);
        s.optional_cycles[u] = std::clamp(x[md.optional_var[u]], ov.lower, ov.upper) * kCyclesPerUnit;
    }
    return s;
}

}  // namespace impsched
