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

#include "impsched/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace impsched::lp {

int LinearProgram::add_variable(std::string name, double lower, double upper, double cost) {
    vars_.push_back({std::move(name), lower, upper, cost, false});
    return static_cast<int>(vars_.size()) - 1;
}

int LinearProgram::add_constraint(std::string name, std::vector<Term> terms, double lower, double upper) {
    rows_.push_back({std::move(name), std::move(terms), lower, upper});
    return static_cast<int>(rows_.size()) - 1;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
    auto &v = vars_.at(var);
    v.lower = lower;
    v.upper = upper;
}

double LinearProgram::objective(std::span<const double> x) const {
    double z = objective_constant_;
    for (std::size_t j = 0; j < vars_.size(); ++j) z += vars_[j].cost * x[j];
    return z;
}

double LinearProgram::row_activity(int r, std::span<const double> x) const {
    double a = 0.0;
    for (const Term &t : rows_.at(r).terms) a += t.coef * x[t.var];
    return a;
}

double LinearProgram::max_violation(std::span<const double> x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < vars_.size(); ++j) {
        worst = std::max({worst, vars_[j].lower - x[j], x[j] - vars_[j].upper});
    }
    for (int r = 0; r < num_constraints(); ++r) {
        const double a = row_activity(r, x);
        worst = std::max({worst, rows_[r].lower - a, a - rows_[r].upper});
    }
    return worst;
}

void LinearProgram::validate() const {
    for (const auto &v : vars_) {
        if (!(v.lower <= v.upper) || v.lower == kInf || v.upper == -kInf) {
            throw std::invalid_argument("variable " + v.name + " has crossed bounds");
        }
        if (!std::isfinite(v.cost)) throw std::invalid_argument("variable " + v.name + " has a non-finite cost");
    }
    for (const auto &r : rows_) {
        if (!(r.lower <= r.upper) || r.lower == kInf || r.upper == -kInf) {
            throw std::invalid_argument("constraint " + r.name + " has crossed bounds");
        }
        for (const Term &t : r.terms) {
            if (t.var < 0 || t.var >= num_variables()) {
                throw std::invalid_argument("constraint " + r.name + " references an undeclared variable");
            }
            if (!std::isfinite(t.coef)) throw std::invalid_argument("constraint " + r.name + " has a non-finite coefficient");
        }
    }
}

std::string_view to_string(Status s) {
    switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
    case Status::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

namespace {

enum : signed char { kBasic = 0, kAtLower = 1, kAtUpper = 2, kAtZero = 3, kFixed = 4 };

enum class Outcome { optimal, infeasible, unbounded, iteration_limit, singular, not_dual_feasible };

constexpr double kPivotTol = 1e-9;
constexpr int kDegenerateSwitch = 40;

double pow2_round(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
    return std::exp2(std::round(std::log2(s)));
}

}  // namespace

struct SimplexSolver::Impl {
    LinearProgram lp;
    SolverOptions opt;
    int n = 0;  // structural columns
    int m = 0;  // rows
    int total = 0;
    double sense = 1.0;

    std::vector<std::vector<std::pair<int, double>>> cols;  // scaled structural columns
    std::vector<double> row_scale, col_scale;
    std::vector<double> lo, up, cost;

    std::vector<int> head;
    std::vector<int> pos;  // basis position or -1
    std::vector<signed char> status;
    std::vector<double> x;
    std::vector<double> binv;  // m x m, row-major
    bool factored = false;
    int since_refactor = 0;
    int iterations = 0;

    // scratch
    std::vector<double> alpha, y, dj, rho;

    Impl(const LinearProgram &program, SolverOptions o) : lp(program), opt(o) {
        lp.validate();
        n = lp.num_variables();
        m = lp.num_constraints();
        total = n + m;
        sense = lp.sense() == Sense::maximize ? -1.0 : 1.0;
        build_scaled();
        cold_basis();
        alpha.assign(m, 0.0);
        y.assign(m, 0.0);
        rho.assign(m, 0.0);
        dj.assign(total, 0.0);
    }

    void build_scaled() {
        row_scale.assign(m, 1.0);
        col_scale.assign(n, 1.0);
        std::vector<std::vector<std::pair<int, double>>> raw(n);
        for (int r = 0; r < m; ++r) {
            for (const Term &t : lp.constraint(r).terms) {
                if (t.coef != 0.0) raw[t.var].push_back({r, t.coef});
            }
        }
        // Merge duplicate (row, var) entries.
        for (auto &c : raw) {
            std::sort(c.begin(), c.end(), [](auto &a, auto &b) { return a.first < b.first; });
            std::vector<std::pair<int, double>> merged;
            for (auto &e : c) {
                if (!merged.empty() && merged.back().first == e.first) {
                    merged.back().second += e.second;
                } else {
                    merged.push_back(e);
                }
            }
            std::erase_if(merged, [](auto &e) { return e.second == 0.0; });
            c = std::move(merged);
        }

        if (opt.scale) {
            for (int pass = 0; pass < 6; ++pass) {
                std::vector<double> rmin(m, kInf), rmax(m, 0.0);
                for (int j = 0; j < n; ++j) {
                    for (auto [r, v] : raw[j]) {
                        const double a = std::abs(v) * col_scale[j];
                        rmin[r] = std::min(rmin[r], a);
                        rmax[r] = std::max(rmax[r], a);
                    }
                }
                for (int r = 0; r < m; ++r) {
                    if (rmax[r] > 0.0) row_scale[r] = 1.0 / std::sqrt(rmin[r] * rmax[r]);
                }
                for (int j = 0; j < n; ++j) {
                    double cmin = kInf, cmax = 0.0;
                    for (auto [r, v] : raw[j]) {
                        const double a = std::abs(v) * row_scale[r];
                        cmin = std::min(cmin, a);
                        cmax = std::max(cmax, a);
                    }
                    if (cmax > 0.0) col_scale[j] = 1.0 / std::sqrt(cmin * cmax);
                }
            }
            for (auto &s : row_scale) s = pow2_round(s);
            for (auto &s : col_scale) s = pow2_round(s);
        }

        cols.assign(n, {});
        for (int j = 0; j < n; ++j) {
            for (auto [r, v] : raw[j]) cols[j].push_back({r, v * row_scale[r] * col_scale[j]});
        }
        lo.assign(total, 0.0);
        up.assign(total, 0.0);
        cost.assign(total, 0.0);
        for (int j = 0; j < n; ++j) {
            const auto &v = lp.variable(j);
            lo[j] = v.lower / col_scale[j];
            up[j] = v.upper / col_scale[j];
            cost[j] = sense * v.cost * col_scale[j];
        }
        for (int r = 0; r < m; ++r) {
            const auto &c = lp.constraint(r);
            lo[n + r] = c.lower * row_scale[r];
            up[n + r] = c.upper * row_scale[r];
        }
    }

    static signed char resting_status(double l, double u) {
        if (l == u) return kFixed;
        if (std::isfinite(l)) return kAtLower;
        if (std::isfinite(u)) return kAtUpper;
        return kAtZero;
    }

    double resting_value(int j) const {
        switch (status[j]) {
        case kAtLower:
        case kFixed: return lo[j];
        case kAtUpper: return up[j];
        default: return 0.0;
        }
    }

    void cold_basis() {
        head.resize(m);
        pos.assign(total, -1);
        status.assign(total, kBasic);
        x.assign(total, 0.0);
        for (int j = 0; j < n; ++j) {
            status[j] = resting_status(lo[j], up[j]);
            x[j] = resting_value(j);
        }
        for (int r = 0; r < m; ++r) {
            head[r] = n + r;
            pos[n + r] = r;
            status[n + r] = kBasic;
        }
        binv.assign(static_cast<std::size_t>(m) * m, 0.0);
        for (int r = 0; r < m; ++r) binv[static_cast<std::size_t>(r) * m + r] = -1.0;
        factored = true;
        since_refactor = 0;
        compute_basic_values();
    }

    // alpha = B^{-1} a_j
    void ftran(int j, std::vector<double> &out) const {
        std::fill(out.begin(), out.end(), 0.0);
        if (j >= n) {
            const int r = j - n;
            for (int i = 0; i < m; ++i) out[i] = -binv[static_cast<std::size_t>(i) * m + r];
            return;
        }
        for (int i = 0; i < m; ++i) {
            const double *row = &binv[static_cast<std::size_t>(i) * m];
            double s = 0.0;
            for (auto [r, v] : cols[j]) s += row[r] * v;
            out[i] = s;
        }
    }

    double dot_column(const std::vector<double> &vec, int j) const {
        if (j >= n) return -vec[j - n];
        double s = 0.0;
        for (auto [r, v] : cols[j]) s += vec[r] * v;
        return s;
    }

    bool refactor() {
        const std::size_t mm = static_cast<std::size_t>(m);
        std::vector<double> a(mm * mm, 0.0);
        for (int i = 0; i < m; ++i) {
            const int j = head[i];
            if (j >= n) {
                a[static_cast<std::size_t>(j - n) * mm + i] = -1.0;
            } else {
                for (auto [r, v] : cols[j]) a[static_cast<std::size_t>(r) * mm + i] = v;
            }
        }
        // Gauss-Jordan on [B | I]; inverse maps row space -> basis positions.
        std::vector<double> inv(mm * mm, 0.0);
        for (std::size_t i = 0; i < mm; ++i) inv[i * mm + i] = 1.0;
        for (std::size_t c = 0; c < mm; ++c) {
            std::size_t piv = c;
            double best = std::abs(a[c * mm + c]);
            for (std::size_t r = c + 1; r < mm; ++r) {
                const double v = std::abs(a[r * mm + c]);
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            if (best < 1e-11) return false;
            if (piv != c) {
                std::swap_ranges(a.begin() + c * mm, a.begin() + (c + 1) * mm, a.begin() + piv * mm);
                std::swap_ranges(inv.begin() + c * mm, inv.begin() + (c + 1) * mm, inv.begin() + piv * mm);
            }
            const double d = 1.0 / a[c * mm + c];
            for (std::size_t k = 0; k < mm; ++k) {
                a[c * mm + k] *= d;
                inv[c * mm + k] *= d;
            }
            for (std::size_t r = 0; r < mm; ++r) {
                if (r == c) continue;
                const double f = a[r * mm + c];
                if (f == 0.0) continue;
                for (std::size_t k = c; k < mm; ++k) a[r * mm + k] -= f * a[c * mm + k];
                for (std::size_t k = 0; k < mm; ++k) inv[r * mm + k] -= f * inv[c * mm + k];
            }
        }
        // After elimination row c of `a` is e_c, so inv = B^{-1} with rows as positions.
        binv = std::move(inv);
        factored = true;
        since_refactor = 0;
        return true;
    }

    void compute_basic_values() {
        std::vector<double> rhs(m, 0.0);
        for (int j = 0; j < total; ++j) {
            if (status[j] == kBasic) continue;
            x[j] = resting_value(j);
            if (x[j] == 0.0) continue;
            if (j >= n) {
                rhs[j - n] += x[j];
            } else {
                for (auto [r, v] : cols[j]) rhs[r] -= v * x[j];
            }
        }
        for (int i = 0; i < m; ++i) {
            const double *row = &binv[static_cast<std::size_t>(i) * m];
            double s = 0.0;
            for (int r = 0; r < m; ++r) s += row[r] * rhs[r];
            x[head[i]] = s;
        }
    }

    void pivot(int r, int entering) {
        const std::size_t mm = static_cast<std::size_t>(m);
        double *prow = &binv[static_cast<std::size_t>(r) * mm];
        const double inv_p = 1.0 / alpha[r];
        for (std::size_t k = 0; k < mm; ++k) prow[k] *= inv_p;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            const double f = alpha[i];
            if (f == 0.0) continue;
            double *row = &binv[static_cast<std::size_t>(i) * mm];
            for (std::size_t k = 0; k < mm; ++k) row[k] -= f * prow[k];
        }
        const int leaving = head[r];
        pos[leaving] = -1;
        head[r] = entering;
        pos[entering] = r;
        status[entering] = kBasic;
        ++since_refactor;
    }

    double infeasibility(int j) const {
        if (x[j] < lo[j] - opt.primal_tolerance) return lo[j] - x[j];
        if (x[j] > up[j] + opt.primal_tolerance) return x[j] - up[j];
        return 0.0;
    }

    bool primal_feasible() const {
        for (int i = 0; i < m; ++i) {
            if (infeasibility(head[i]) > 0.0) return false;
        }
        return true;
    }

    // y = c_B^T B^{-1} for the given basic costs.
    void compute_duals(const std::vector<double> &cb) {
        std::fill(y.begin(), y.end(), 0.0);
        for (int i = 0; i < m; ++i) {
            if (cb[i] == 0.0) continue;
            const double *row = &binv[static_cast<std::size_t>(i) * m];
            for (int r = 0; r < m; ++r) y[r] += cb[i] * row[r];
        }
    }

    bool eligible(int j, double d, double tol) const {
        switch (status[j]) {
        case kAtLower: return d < -tol;
        case kAtUpper: return d > tol;
        case kAtZero: return std::abs(d) > tol;
        default: return false;
        }
    }

    bool maybe_refactor() {
        if (since_refactor >= opt.refactor_interval) {
            if (!refactor()) return false;
            compute_basic_values();
        }
        return true;
    }

    Outcome primal() {
        std::vector<double> cb(m, 0.0);
        int degenerate = 0;
        bool verified = false;
        while (true) {
            if (iterations >= opt.max_iterations) return Outcome::iteration_limit;
            if (!maybe_refactor()) return Outcome::singular;

            bool phase1 = false;
            for (int i = 0; i < m; ++i) {
                const int j = head[i];
                if (x[j] < lo[j] - opt.primal_tolerance) {
                    cb[i] = -1.0;
                    phase1 = true;
                } else if (x[j] > up[j] + opt.primal_tolerance) {
                    cb[i] = 1.0;
                    phase1 = true;
                } else {
                    cb[i] = 0.0;
                }
            }
            if (!phase1) {
                for (int i = 0; i < m; ++i) cb[i] = cost[head[i]];
            }
            compute_duals(cb);

            const bool bland = opt.bland_only || degenerate >= kDegenerateSwitch;
            int q = -1;
            double best = 0.0;
            for (int j = 0; j < total; ++j) {
                if (status[j] == kBasic || status[j] == kFixed) continue;
                const double d = (phase1 ? 0.0 : cost[j]) - dot_column(y, j);
                if (!eligible(j, d, opt.dual_tolerance)) continue;
                if (bland) {
                    q = j;
                    dj[j] = d;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    q = j;
                    dj[j] = d;
                }
            }

            if (q < 0) {
                // Confirm on a fresh factorization before concluding.
                if (!verified && since_refactor > 0) {
                    if (!refactor()) return Outcome::singular;
                    compute_basic_values();
                    verified = true;
                    continue;
                }
                return phase1 ? Outcome::infeasible : Outcome::optimal;
            }
            verified = false;

            ftran(q, alpha);
            const double dir = dj[q] < 0.0 ? 1.0 : -1.0;
            const double flip = (dir > 0.0) ? up[q] - x[q] : x[q] - lo[q];

            // Harris ratio test with phase-1 breakpoints at violated bounds.
            const double tol = opt.primal_tolerance;
            double theta = kInf;
            for (int i = 0; i < m; ++i) {
                const double a = dir * alpha[i];
                if (std::abs(a) < kPivotTol) continue;
                const int j = head[i];
                double limit = kInf;
                if (a > 0.0) {  // x_j decreases
                    if (x[j] > up[j] + tol) {
                        limit = (x[j] - up[j] + tol) / a;
                    } else if (x[j] >= lo[j] - tol && std::isfinite(lo[j])) {
                        limit = (x[j] - lo[j] + tol) / a;
                    }
                } else {  // x_j increases
                    if (x[j] < lo[j] - tol) {
                        limit = (lo[j] - x[j] + tol) / -a;
                    } else if (x[j] <= up[j] + tol && std::isfinite(up[j])) {
                        limit = (up[j] - x[j] + tol) / -a;
                    }
                }
                theta = std::min(theta, limit);
            }

            int r = -1;
            double step = 0.0;
            double rmax = 0.0;
            for (int i = 0; i < m && std::isfinite(theta); ++i) {
                const double a = dir * alpha[i];
                if (std::abs(a) < kPivotTol) continue;
                const int j = head[i];
                double exact = kInf;
                if (a > 0.0) {
                    if (x[j] > up[j] + tol) {
                        exact = (x[j] - up[j]) / a;
                    } else if (x[j] >= lo[j] - tol && std::isfinite(lo[j])) {
                        exact = (x[j] - lo[j]) / a;
                    }
                } else {
                    if (x[j] < lo[j] - tol) {
                        exact = (lo[j] - x[j]) / -a;
                    } else if (x[j] <= up[j] + tol && std::isfinite(up[j])) {
                        exact = (up[j] - x[j]) / -a;
                    }
                }
                if (exact > theta) continue;
                bool take;
                if (bland) {
                    take = r < 0 || exact < step - 1e-15 || (exact <= step + 1e-15 && head[i] < head[r]);
                } else {
                    take = std::abs(a) > rmax;
                }
                if (take) {
                    r = i;
                    step = std::max(0.0, exact);
                    rmax = std::abs(a);
                }
            }

            if (r < 0 && !std::isfinite(flip)) {
                if (phase1) return Outcome::singular;  // cannot happen with exact arithmetic
                return Outcome::unbounded;
            }
            ++iterations;

            if (r < 0 || flip <= step) {
                // entering variable moves to its opposite bound
                const double t = flip;
                for (int i = 0; i < m; ++i) x[head[i]] -= dir * t * alpha[i];
                status[q] = dir > 0.0 ? kAtUpper : kAtLower;
                x[q] = resting_value(q);
                degenerate = t <= 1e-12 ? degenerate + 1 : 0;
                continue;
            }

            const int leaving = head[r];
            // Bound the leaving variable reaches: a decreasing variable stops
            // at its upper bound only when it started above it.
            const bool decreasing = dir * alpha[r] > 0.0;
            signed char rest;
            if (decreasing) {
                rest = x[leaving] > up[leaving] + tol ? kAtUpper : kAtLower;
            } else {
                rest = x[leaving] < lo[leaving] - tol ? kAtLower : kAtUpper;
            }
            if (lo[leaving] == up[leaving]) rest = kFixed;
            for (int i = 0; i < m; ++i) x[head[i]] -= dir * step * alpha[i];
            x[q] += dir * step;
            pivot(r, q);
            status[leaving] = rest;
            x[leaving] = resting_value(leaving);
            degenerate = step <= 1e-12 ? degenerate + 1 : 0;
        }
    }

    Outcome dual() {
        std::vector<double> cb(m, 0.0);
        std::vector<double> arow(total, 0.0);
        bool verified = false;
        while (true) {
            if (iterations >= opt.max_iterations) return Outcome::iteration_limit;
            if (!maybe_refactor()) return Outcome::singular;

            int r = -1;
            double worst = 0.0;
            for (int i = 0; i < m; ++i) {
                const double v = infeasibility(head[i]);
                if (v > worst) {
                    worst = v;
                    r = i;
                }
            }
            if (r < 0) {
                if (!verified && since_refactor > 0) {
                    if (!refactor()) return Outcome::singular;
                    compute_basic_values();
                    verified = true;
                    continue;
                }
                return Outcome::optimal;
            }
            verified = false;

            for (int i = 0; i < m; ++i) cb[i] = cost[head[i]];
            compute_duals(cb);
            for (int k = 0; k < m; ++k) rho[k] = binv[static_cast<std::size_t>(r) * m + k];

            const int leaving = head[r];
            const bool to_lower = x[leaving] < lo[leaving];
            const double tol = opt.dual_tolerance;

            // Harris two-pass dual ratio test.
            double theta = kInf;
            for (int j = 0; j < total; ++j) {
                if (status[j] == kBasic || status[j] == kFixed) {
                    arow[j] = 0.0;
                    continue;
                }
                const double a = dot_column(rho, j);
                arow[j] = a;
                dj[j] = cost[j] - dot_column(y, j);
                if (std::abs(a) < kPivotTol) continue;
                const double d = dj[j];
                if (status[j] == kAtLower && d < -tol) return Outcome::not_dual_feasible;
                if (status[j] == kAtUpper && d > tol) return Outcome::not_dual_feasible;
                if (status[j] == kAtZero && std::abs(d) > tol) return Outcome::not_dual_feasible;
                bool ok;
                if (status[j] == kAtZero) {
                    ok = true;
                } else if (to_lower) {
                    ok = (status[j] == kAtLower && a < 0.0) || (status[j] == kAtUpper && a > 0.0);
                } else {
                    ok = (status[j] == kAtLower && a > 0.0) || (status[j] == kAtUpper && a < 0.0);
                }
                if (!ok) continue;
                theta = std::min(theta, (std::abs(d) + tol) / std::abs(a));
            }
            int q = -1;
            double amax = 0.0;
            for (int j = 0; j < total && std::isfinite(theta); ++j) {
                if (status[j] == kBasic || status[j] == kFixed) continue;
                const double a = arow[j];
                if (std::abs(a) < kPivotTol) continue;
                bool ok;
                if (status[j] == kAtZero) {
                    ok = true;
                } else if (to_lower) {
                    ok = (status[j] == kAtLower && a < 0.0) || (status[j] == kAtUpper && a > 0.0);
                } else {
                    ok = (status[j] == kAtLower && a > 0.0) || (status[j] == kAtUpper && a < 0.0);
                }
                if (!ok) continue;
                if (std::abs(dj[j]) / std::abs(a) > theta) continue;
                if (std::abs(a) > amax) {
                    amax = std::abs(a);
                    q = j;
                }
            }
            if (q < 0) return Outcome::infeasible;
            ++iterations;

            ftran(q, alpha);
            if (std::abs(alpha[r]) < kPivotTol) return Outcome::singular;
            const double target = to_lower ? lo[leaving] : up[leaving];
            const double delta = (x[leaving] - target) / alpha[r];
            for (int i = 0; i < m; ++i) x[head[i]] -= alpha[i] * delta;
            x[q] += delta;
            status[leaving] = to_lower ? kAtLower : kAtUpper;
            if (lo[leaving] == up[leaving]) status[leaving] = kFixed;
            pivot(r, q);
            x[leaving] = target;
        }
    }

    bool dual_feasible() {
        std::vector<double> cb(m);
        for (int i = 0; i < m; ++i) cb[i] = cost[head[i]];
        compute_duals(cb);
        for (int j = 0; j < total; ++j) {
            if (status[j] == kBasic || status[j] == kFixed) continue;
            if (eligible(j, cost[j] - dot_column(y, j), opt.dual_tolerance)) return false;
        }
        return true;
    }

    Outcome run() {
        iterations = 0;
        if (!factored || !refactor()) cold_basis();
        compute_basic_values();

        Outcome out = Outcome::optimal;
        if (!primal_feasible() && dual_feasible()) {
            out = dual();
            if (out == Outcome::infeasible || out == Outcome::iteration_limit) return out;
        }
        for (int attempt = 0; attempt < 3; ++attempt) {
            if (out == Outcome::singular) {
                cold_basis();
            }
            out = primal();
            if (out != Outcome::singular) return out;
        }
        return Outcome::singular;
    }

    void set_bounds(int j, double l, double u) {
        lo[j] = l / col_scale[j];
        up[j] = u / col_scale[j];
        if (status[j] != kBasic) {
            const signed char prev = status[j];
            status[j] = resting_status(lo[j], up[j]);
            if (prev == kAtUpper && std::isfinite(up[j]) && lo[j] != up[j]) status[j] = kAtUpper;
            x[j] = resting_value(j);
        }
    }

    Solution extract(Outcome o) {
        Solution s;
        s.iterations = iterations;
        switch (o) {
        case Outcome::optimal: s.status = Status::optimal; break;
        case Outcome::infeasible: s.status = Status::infeasible; break;
        case Outcome::unbounded: s.status = Status::unbounded; break;
        case Outcome::iteration_limit: s.status = Status::iteration_limit; break;
        default: s.status = Status::numerical_failure; break;
        }
        s.x.resize(n);
        for (int j = 0; j < n; ++j) s.x[j] = x[j] * col_scale[j];
        s.row_activity.resize(m);
        for (int r = 0; r < m; ++r) s.row_activity[r] = lp.row_activity(r, s.x);
        s.objective = lp.objective(s.x);

        std::vector<double> cb(m);
        for (int i = 0; i < m; ++i) cb[i] = cost[head[i]];
        compute_duals(cb);
        s.row_dual.resize(m);
        for (int r = 0; r < m; ++r) s.row_dual[r] = y[r] * row_scale[r];
        s.reduced_cost.resize(n);
        for (int j = 0; j < n; ++j) {
            s.reduced_cost[j] = status[j] == kBasic ? 0.0 : (cost[j] - dot_column(y, j)) / col_scale[j];
        }
        return s;
    }
};

SimplexSolver::SimplexSolver(const LinearProgram &lp, SolverOptions opts)
    : impl_(std::make_unique<Impl>(lp, opts)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver &&) noexcept = default;
SimplexSolver &SimplexSolver::operator=(SimplexSolver &&) noexcept = default;

Solution SimplexSolver::solve() { return impl_->extract(impl_->run()); }

void SimplexSolver::set_variable_bounds(int var, double lower, double upper) {
    if (var < 0 || var >= impl_->n) throw std::out_of_range("set_variable_bounds: bad variable");
    if (!(lower <= upper)) throw std::invalid_argument("set_variable_bounds: crossed bounds");
    impl_->set_bounds(var, lower, upper);
}

double SimplexSolver::variable_lower(int var) const { return impl_->lo.at(var) * impl_->col_scale.at(var); }
double SimplexSolver::variable_upper(int var) const { return impl_->up.at(var) * impl_->col_scale.at(var); }

Basis SimplexSolver::basis() const { return {impl_->head, impl_->status}; }

void SimplexSolver::set_basis(const Basis &b) {
    auto &s = *impl_;
    if (static_cast<int>(b.head.size()) != s.m || static_cast<int>(b.status.size()) != s.total) {
        throw std::invalid_argument("set_basis: size mismatch");
    }
    s.head = b.head;
    s.status = b.status;
    s.pos.assign(s.total, -1);
    for (int i = 0; i < s.m; ++i) s.pos[s.head[i]] = i;
    for (int j = 0; j < s.total; ++j) {
        if (s.status[j] == kBasic) continue;
        // Re-derive resting status against the current bounds.
        const signed char prev = s.status[j];
        s.status[j] = Impl::resting_status(s.lo[j], s.up[j]);
        if (prev == kAtUpper && std::isfinite(s.up[j]) && s.lo[j] != s.up[j]) s.status[j] = kAtUpper;
        s.x[j] = s.resting_value(j);
    }
    s.factored = false;
    if (s.refactor()) {
        s.compute_basic_values();
    } else {
        s.cold_basis();
    }
}

const LinearProgram &SimplexSolver::program() const { return impl_->lp; }

Solution solve(const LinearProgram &lp, const SolverOptions &opts) {
    SimplexSolver solver(lp, opts);
    return solver.solve();
}

}  // namespace impsched::lp
