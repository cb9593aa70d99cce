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

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "impsched/energy.hpp"
#include "impsched/listsched.hpp"
#include "impsched/lp.hpp"
#include "impsched/schedule.hpp"
#include "impsched/taskgraph.hpp"

namespace impsched {

struct AffineExpr {
    std::vector<lp::Term> terms;
    double constant = 0.0;
};

/**
 * Rows making `z` equal to x * y for binary x and 0 <= y <= upper:
 * z <= upper * x, z <= y, z >= y - upper * (1 - x). Lower bound z >= 0 is
 * imposed on the column. Returns the three row indices.
 */
std::array<int, 3> linearize_product(lp::LinearProgram &lp, int z, int x, const AffineExpr &y, double upper,
                                     const std::string &name);

enum class BinaryKind : signed char { assignment, ordering, clamp };

struct MilpOptions {
    bool fix_ancestor_order = true;  // drop arcs u -> v when v is an ancestor of u
    bool break_symmetry = true;      // the source goes to processor 0
};

/// Full mixed-integer model over assignment, order, frequency split and errors.
struct MilpModel {
    lp::LinearProgram lp;
    std::size_t processors = 0;
    std::size_t tasks = 0;
    double deadline = 0.0;
    double eps_max = 0.0;

    // Index `tasks` stands for the virtual start (as a predecessor) or end
    // (as a successor) node of every processor.
    std::vector<std::vector<int>> assign_var;               // [k][u]
    std::vector<std::vector<std::vector<int>>> order_var;   // [k][a][b], -1 if absent
    std::vector<int> clamp_var;                              // X_u, -1 below two parents or when m = 0
    std::vector<int> product_var;                            // Z_u, -1 below two parents
    std::vector<int> start_var;
    std::vector<std::vector<int>> cycle_var;
    std::vector<int> optional_var;
    int energy_row = -1;

    std::vector<int> binaries;  // assignment, then ordering, then clamp variables
    std::vector<BinaryKind> binary_kind;
};

MilpModel build_milp(const TaskGraph &g, std::size_t processors, const FrequencySet &fs, const PowerModel &pm,
                     double eps_max, double deadline, const MilpOptions &opts = {});

/// Processor order from the Y arcs at an integral point; nullopt when they
/// do not form one start-to-end path per processor over its tasks.
std::optional<Assignment> decode_order(const MilpModel &model, std::span<const double> x);
/// Processor of every task from the assignment columns.
std::vector<std::size_t> decode_processors(const MilpModel &model, std::span<const double> x);

Schedule extract_milp_schedule(const MilpModel &model, std::span<const double> x, const Assignment &asg);

enum class BnbStatus { optimal, feasible, infeasible, unknown };
std::string_view to_string(BnbStatus s);

struct BnbOptions {
    double time_limit = 600.0;  // seconds
    std::size_t node_cap = 1000000;
    double integrality_tolerance = 1e-6;
    double prune_tolerance = 1e-7;
    bool clamp_first = true;  // branch on fractional clamp binaries before any other
};

struct BnbResult {
    BnbStatus status = BnbStatus::unknown;
    double objective = 0.0;   // incumbent QoS
    double best_bound = 0.0;  // upper bound on the optimum
    std::size_t nodes = 0;
    std::size_t lp_iterations = 0;
    double wall_time = 0.0;
    std::size_t bound_increases = 0;  // child relaxations above their parent's
    std::size_t order_repairs = 0;    // integral points whose arcs needed rebuilding
    std::size_t rejected_incumbents = 0;
    std::optional<Schedule> schedule;

    double gap() const;
};

/**
 * Best-bound branch-and-bound on the LP relaxation with plunging: after a
 * branch the search dives into one child on the warm basis and queues the
 * other. Branches on the most fractional clamp binary while any clamp is
 * fractional, then on the most fractional binary overall, ties broken by
 * kind (assignment, ordering, clamp) and then index. The clamps carry
 * almost all of the root gap; `clamp_first = false` gives the plain rule.
 */
BnbResult solve_branch_and_bound(const MilpModel &model, const TaskGraph &g, const PowerModel &pm,
                                 const FrequencySet &fs, const BnbOptions &opts = {});

}  // namespace impsched
