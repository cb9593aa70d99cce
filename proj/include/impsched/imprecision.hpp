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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "impsched/taskgraph.hpp"

namespace impsched {

// Error and precision algebra. Every function validates its ranges and
// throws std::domain_error on violation.

/// Portion of discarded optional work: 1 - o / O.
double output_error(double total_optional, double executed_optional);
/// min(1, sum of parent output errors); 0 for a source.
double input_error(std::span<const double> parent_output_errors);
/// Extra mandatory cycles needed to compensate an input error.
double mandatory_extension(double scaling_factor, double input_error);
/// P_T + (1 - P_T) * o / O.
double precision(double threshold, double total_optional, double executed_optional);
/// Mean precision over the exit tasks.
double qos(std::span<const double> exit_precisions);

/**
 * Result of the labeling heuristic.
 *
 * `precise[u]` is set for non-exit tasks only: true runs the whole optional
 * part, false discards it. `extended[u]` holds for every task with at least
 * one imprecise parent.
 */
struct Labeling {
    std::vector<std::optional<bool>> precise;
    std::vector<bool> extended;

    bool operator==(const Labeling &) const = default;
};

struct EffectiveWorkloads {
    std::vector<Cycles> mandatory;       // M or M + m, every task
    std::vector<Cycles> optional_fixed;  // O or 0 for non-exit tasks, 0 for exits
    std::vector<Cycles> total;           // mandatory + optional_fixed for non-exit tasks

    bool operator==(const EffectiveWorkloads &) const = default;
};

/// Label from per-task decisions; extensions are derived from the parents.
Labeling make_labeling(const TaskGraph &g, const std::vector<std::optional<bool>> &precise);

/// Throws std::invalid_argument when `lab` does not fit `g`.
void check_labeling(const TaskGraph &g, const Labeling &lab);

/// Tasks whose optional part is the unit placeholder are always precise.
bool is_labelable(const TaskGraph &g, TaskIndex u);

EffectiveWorkloads effective_workloads(const TaskGraph &g, const Labeling &lab);

/// Sum of W over non-exit tasks plus the (extended) mandatory work of exits.
Cycles reduction_objective(const TaskGraph &g, const Labeling &lab);

/// Single parent with children: discard the optional part when the total
/// extension it would cause does not exceed it. Returns true for precise.
bool base_case1_decision(Cycles parent_optional, std::span<const Cycles> child_extensions);

struct ForwardPassTrace {
    std::size_t update_rounds = 0;
    std::size_t label_changes = 0;
};

/**
 * First pass: parents in topological order decide independently, ignoring
 * children already extended by an earlier imprecise parent. An update pass
 * then revisits the parents of extended multi-parent children (each such
 * child once) until no decision changes. Requires a single-source graph.
 */
Labeling forward_pass(const TaskGraph &g, ForwardPassTrace *trace = nullptr);

/**
 * Second pass, in reverse topological order: for each multi-parent task the
 * precise parents are sorted by their number of intact children and the
 * prefix whose flip to imprecise reduces the objective most is applied.
 */
Labeling backward_pass(const TaskGraph &g, const Labeling &lab);

struct LabelResult {
    Labeling labeling;
    EffectiveWorkloads workloads;
};

LabelResult imp_label(const TaskGraph &g, ForwardPassTrace *trace = nullptr);

/// One line per task `label <id> precise=<0|1|-> extended=<0|1>`, sorted by id.
std::string format_labeling(const TaskGraph &g, const Labeling &lab);
Labeling parse_labeling(const TaskGraph &g, std::string_view text);

}  // namespace impsched
