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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

#include "impsched/milp.hpp"

namespace impsched {

std::string_view to_string(BnbStatus s) {
    switch (s) {
    case BnbStatus::optimal: return "optimal";
    case BnbStatus::feasible: return "feasible";
    case BnbStatus::infeasible: return "infeasible";
    case BnbStatus::unknown: return "unknown";
    }
    return "unknown";
}

double BnbResult::gap() const {
    if (!schedule) return std::numeric_limits<double>::infinity();
    return std::max(0.0, best_bound - objective) / std::max(std::abs(objective), 1e-12);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
    std::vector<std::pair<int, signed char>> fixes;  // binary position, value
    lp::Basis basis;
    double bound = 0.0;
    std::uint64_t seq = 0;
};

struct Worse {
    bool operator()(const Node &a, const Node &b) const {
        if (a.bound != b.bound) return a.bound < b.bound;
        return a.seq > b.seq;
    }
};

class Search {
  public:
    Search(const MilpModel &md, const TaskGraph &g, const PowerModel &pm, const FrequencySet &fs,
           const BnbOptions &opts)
        : md_(md), g_(g), pm_(pm), fs_(fs), opts_(opts), solver_(md.lp) {
        const std::size_t nb = md.binaries.size();
        root_lo_.resize(nb);
        root_up_.resize(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            root_lo_[b] = md.lp.variable(md.binaries[b]).lower;
            root_up_[b] = md.lp.variable(md.binaries[b]).upper;
        }
        cur_lo_ = root_lo_;
        cur_up_ = root_up_;
    }

    BnbResult run() {
        const auto t0 = Clock::now();
        auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

        std::priority_queue<Node, std::vector<Node>, Worse> open;
        std::vector<Node> stack;
        open.push(Node{{}, {}, std::numeric_limits<double>::infinity(), seq_++});
        bool timed_out = false;
        double open_bound_at_stop = -std::numeric_limits<double>::infinity();

        while (!open.empty() || !stack.empty()) {
            if (elapsed() > opts_.time_limit) {
                timed_out = true;
                break;
            }
            Node node;
            if (!stack.empty()) {
                node = std::move(stack.back());
                stack.pop_back();
            } else {
                node = open.top();
                open.pop();
            }
            if (has_incumbent_ && node.bound <= incumbent_ + opts_.prune_tolerance) continue;

            // Plunge from this node.
            auto fixes = std::move(node.fixes);
            double parent_bound = node.bound;
            bool warm = false;
            while (true) {
                if (elapsed() > opts_.time_limit) {
                    timed_out = true;
                    open_bound_at_stop = std::max(open_bound_at_stop, parent_bound);
                    break;
                }
                apply(fixes);
                if (!warm && !node.basis.empty()) solver_.set_basis(node.basis);
                warm = true;
                const lp::Solution sol = solve();
                ++result_.nodes;
                if (sol.status == lp::Status::infeasible) break;
                if (!sol.optimal()) {
                    unsound_ = true;
                    break;
                }
                double bound = sol.objective;
                if (bound > parent_bound + 1e-7 * std::max(1.0, std::abs(parent_bound))) ++result_.bound_increases;
                bound = std::min(bound, parent_bound);
                if (has_incumbent_ && bound <= incumbent_ + opts_.prune_tolerance) break;

                const int pick = branching_choice(sol.x);
                if (pick < 0) {
                    integral_leaf(sol.x);
                    break;
                }
                const double v = sol.x[md_.binaries[pick]];
                const signed char dive = v >= 0.5 ? 1 : 0;
                Node other;
                other.fixes = fixes;
                other.fixes.push_back({pick, static_cast<signed char>(1 - dive)});
                other.basis = solver_.basis();
                other.bound = bound;
                other.seq = seq_++;
                if (open.size() >= opts_.node_cap) {
                    stack.push_back(std::move(other));
                } else {
                    open.push(std::move(other));
                }
                fixes.push_back({pick, dive});
                parent_bound = bound;
            }
            if (timed_out) break;
        }

        if (timed_out) {
            while (!open.empty()) {
                open_bound_at_stop = std::max(open_bound_at_stop, open.top().bound);
                open.pop();
            }
            for (const Node &nd : stack) open_bound_at_stop = std::max(open_bound_at_stop, nd.bound);
        }

        result_.wall_time = elapsed();
        if (has_incumbent_) {
            result_.objective = incumbent_;
            result_.schedule = incumbent_schedule_;
        }
        if (!timed_out && !unsound_) {
            result_.status = has_incumbent_ ? BnbStatus::optimal : BnbStatus::infeasible;
            result_.best_bound = has_incumbent_ ? incumbent_ : 0.0;
        } else {
            result_.status = has_incumbent_ ? BnbStatus::feasible : BnbStatus::unknown;
            const double open_bound = std::isfinite(open_bound_at_stop) ? open_bound_at_stop : 1.0;
            result_.best_bound = std::max(has_incumbent_ ? incumbent_ : 0.0, unsound_ ? 1.0 : open_bound);
        }
        return std::move(result_);
    }

  private:
    void apply(const std::vector<std::pair<int, signed char>> &fixes) {
        std::vector<double> lo = root_lo_, up = root_up_;
        for (auto [b, v] : fixes) lo[b] = up[b] = v;
        for (std::size_t b = 0; b < lo.size(); ++b) {
            if (lo[b] != cur_lo_[b] || up[b] != cur_up_[b]) {
                solver_.set_variable_bounds(md_.binaries[b], lo[b], up[b]);
                cur_lo_[b] = lo[b];
                cur_up_[b] = up[b];
            }
        }
    }

    lp::Solution solve() {
        lp::Solution sol = solver_.solve();
        result_.lp_iterations += static_cast<std::size_t>(sol.iterations);
        if (sol.status == lp::Status::numerical_failure || sol.status == lp::Status::iteration_limit) {
            // Cold retry from scratch on a copy with the current bounds.
            lp::LinearProgram copy = md_.lp;
            for (std::size_t b = 0; b < cur_lo_.size(); ++b) copy.set_bounds(md_.binaries[b], cur_lo_[b], cur_up_[b]);
            lp::SolverOptions bland;
            bland.bland_only = true;
            sol = lp::solve(copy, bland);
            result_.lp_iterations += static_cast<std::size_t>(sol.iterations);
        }
        return sol;
    }

    int branching_choice(const std::vector<double> &x) const {
        if (opts_.clamp_first) {
            const int c = most_fractional(x, true);
            if (c >= 0) return c;
        }
        return most_fractional(x, false);
    }

    int most_fractional(const std::vector<double> &x, bool clamps_only) const {
        int best = -1;
        double best_dist = 0.0;
        for (std::size_t b = 0; b < md_.binaries.size(); ++b) {
            if (cur_lo_[b] == cur_up_[b]) continue;
            if (clamps_only && md_.binary_kind[b] != BinaryKind::clamp) continue;
            const double v = x[md_.binaries[b]];
            const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
            if (frac <= opts_.integrality_tolerance) continue;
            // Closeness to 0.5 decides; the binaries list is already in tie order.
            if (best < 0 || frac > best_dist + 1e-12) {
                best = static_cast<int>(b);
                best_dist = frac;
            }
        }
        return best;
    }

    void integral_leaf(const std::vector<double> &x) {
        // Fix every binary at its rounded value and re-solve the continuous part.
        std::vector<std::pair<int, signed char>> all;
        for (std::size_t b = 0; b < md_.binaries.size(); ++b) {
            all.push_back({static_cast<int>(b), static_cast<signed char>(x[md_.binaries[b]] >= 0.5 ? 1 : 0)});
        }
        apply(all);
        const lp::Solution sol = solve();
        if (!sol.optimal()) {
            if (sol.status != lp::Status::infeasible) unsound_ = true;
            ++result_.rejected_incumbents;
            return;
        }
        if (has_incumbent_ && sol.objective <= incumbent_) return;

        std::optional<Assignment> asg = decode_order(md_, sol.x);
        if (!asg) {
            ++result_.order_repairs;
            asg = order_by_start(sol.x);
        }
        Schedule s = extract_milp_schedule(md_, sol.x, *asg);
        const auto rep = verify_schedule(g_, s, *asg, pm_, fs_, md_.eps_max, md_.deadline,
                                         WorkloadContract{ContractKind::input_error, {}});
        if (!rep.ok()) {
            ++result_.rejected_incumbents;
            return;
        }
        has_incumbent_ = true;
        incumbent_ = sol.objective;
        incumbent_schedule_ = std::move(s);
    }

    Assignment order_by_start(const std::vector<double> &x) const {
        Assignment a;
        a.proc_of = decode_processors(md_, x);
        a.order.assign(md_.processors, {});
        for (std::size_t u = 0; u < md_.tasks; ++u) a.order[a.proc_of[u]].push_back(u);
        for (auto &seq : a.order) {
            std::stable_sort(seq.begin(), seq.end(),
                             [&](std::size_t p, std::size_t q) { return x[md_.start_var[p]] < x[md_.start_var[q]]; });
        }
        return a;
    }

    const MilpModel &md_;
    const TaskGraph &g_;
    const PowerModel &pm_;
    const FrequencySet &fs_;
    BnbOptions opts_;
    lp::SimplexSolver solver_;
    std::vector<double> root_lo_, root_up_, cur_lo_, cur_up_;
    std::uint64_t seq_ = 0;
    bool has_incumbent_ = false;
    bool unsound_ = false;
    double incumbent_ = 0.0;
    std::optional<Schedule> incumbent_schedule_;
    BnbResult result_;
};

}  // namespace

BnbResult solve_branch_and_bound(const MilpModel &model, const TaskGraph &g, const PowerModel &pm,
                                 const FrequencySet &fs, const BnbOptions &opts) {
    if (g.size() != model.tasks) throw std::invalid_argument("solve_branch_and_bound: graph does not match model");
    Search search(model, g, pm, fs, opts);
    return search.run();
}

}  // namespace impsched
