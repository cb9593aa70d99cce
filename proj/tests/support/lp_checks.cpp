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

#include "lp_checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace impsched::testing {

using lp::kInf;

lp::LinearProgram random_program(std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> nvar(2, 7), nrow(1, 7), coef(-4, 4), half(-6, 6), kind(0, 99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    lp::LinearProgram p;
    p.set_sense(kind(rng) < 50 ? lp::Sense::maximize : lp::Sense::minimize);
    const int n = nvar(rng);
    const int m = nrow(rng);
    std::vector<double> hidden(n);
    for (int j = 0; j < n; ++j) {
        hidden[j] = half(rng) / 2.0;
        const int k = kind(rng);
        double lo = 0.0, up = kInf;
        if (k < 35) {
            hidden[j] = std::abs(hidden[j]);
        } else if (k < 70) {
            lo = hidden[j] - std::floor(unit(rng) * 4.0);
            up = hidden[j] + std::floor(unit(rng) * 4.0);
        } else if (k < 80) {
            lo = -kInf;
        } else if (k < 90) {
            lo = -kInf;
            up = hidden[j] + std::floor(unit(rng) * 3.0);
        } else if (k < 95) {
            lo = up = hidden[j];
        } else {
            lo = hidden[j] - 1.0;
        }
        p.add_variable("x" + std::to_string(j), lo, up, coef(rng));
    }
    for (int r = 0; r < m; ++r) {
        std::vector<lp::Term> terms;
        double a = 0.0;
        for (int j = 0; j < n; ++j) {
            if (unit(rng) < 0.35) continue;
            const int c = coef(rng);
            if (c == 0) continue;
            terms.push_back({j, static_cast<double>(c)});
            a += c * hidden[j];
        }
        if (terms.empty()) terms.push_back({r % n, 1.0}), a = hidden[r % n];
        const double slack = unit(rng) < 0.25 ? 0.0 : std::floor(unit(rng) * 5.0);
        const int k = kind(rng);
        const std::string name = "r" + std::to_string(r);
        if (k < 40) {
            p.add_le(name, terms, a + slack);
        } else if (k < 75) {
            p.add_ge(name, terms, a - slack);
        } else if (k < 88) {
            p.add_eq(name, terms, a);
        } else {
            p.add_constraint(name, terms, a - slack, a + std::floor(unit(rng) * 3.0));
        }
    }
    if (kind(rng) < 8) {
        // Contradictory pair.
        const int j = kind(rng) % n;
        p.add_ge("bad_lo", {{j, 1.0}, {(j + 1) % n, 1.0}}, 50.0);
        p.add_le("bad_up", {{j, 1.0}, {(j + 1) % n, 1.0}}, 10.0);
    }
    return p;
}

OptimalityReport check_optimality(const lp::LinearProgram &prog, const lp::Solution &s, double tol) {
    OptimalityReport rep;
    std::ostringstream msg;
    const int n = prog.num_variables();
    const int m = prog.num_constraints();
    const double sense = prog.sense() == lp::Sense::maximize ? -1.0 : 1.0;
    if (static_cast<int>(s.x.size()) != n || static_cast<int>(s.row_dual.size()) != m) {
        rep.ok = false;
        rep.message = "solution has wrong dimensions";
        return rep;
    }
    rep.primal_violation = std::max(0.0, prog.max_violation(s.x));

    std::vector<double> d(n);
    for (int j = 0; j < n; ++j) d[j] = sense * prog.variable(j).cost;
    for (int r = 0; r < m; ++r) {
        for (const auto &t : prog.constraint(r).terms) d[t.var] -= s.row_dual[r] * t.coef;
    }
    for (int j = 0; j < n; ++j) {
        const auto &v = prog.variable(j);
        const double x = s.x[j];
        const double stol = tol * (1.0 + std::abs(x));
        if (x > v.lower + stol) rep.dual_violation = std::max(rep.dual_violation, d[j]);
        if (x < v.upper - stol) rep.dual_violation = std::max(rep.dual_violation, -d[j]);
    }
    for (int r = 0; r < m; ++r) {
        const auto &c = prog.constraint(r);
        const double a = prog.row_activity(r, s.x);
        const double stol = tol * (1.0 + std::abs(a));
        if (a > c.lower + stol) rep.slackness_violation = std::max(rep.slackness_violation, s.row_dual[r]);
        if (a < c.upper - stol) rep.slackness_violation = std::max(rep.slackness_violation, -s.row_dual[r]);
    }
    if (rep.primal_violation > tol) msg << "primal violation " << rep.primal_violation << "; ";
    if (rep.dual_violation > tol) msg << "dual violation " << rep.dual_violation << "; ";
    if (rep.slackness_violation > tol) msg << "slackness violation " << rep.slackness_violation << "; ";
    rep.message = msg.str();
    rep.ok = rep.message.empty();
    return rep;
}

}  // namespace impsched::testing
