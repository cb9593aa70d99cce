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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "impsched/imprecision.hpp"
#include "impsched/taskgraph.hpp"

namespace impsched {

/// Task-to-processor map plus the execution order on every processor.
struct Assignment {
    std::vector<std::size_t> proc_of;
    std::vector<std::vector<TaskIndex>> order;

    std::size_t processors() const { return order.size(); }
    /// Throws std::invalid_argument unless every task appears exactly once.
    void validate(std::size_t n_tasks) const;
    bool operator==(const Assignment &) const = default;
};

struct RankTable {
    std::vector<double> rank;  // seconds
};

/// Workloads HEFT sees for the labeled graph: W for non-exit tasks, M' + O for exits.
std::vector<double> scheduling_workloads(const TaskGraph &g, const EffectiveWorkloads &w);
/// M + O for every task.
std::vector<double> initial_workloads(const TaskGraph &g);

/// rank(u) = dur(u) + max over children (comm + rank(child)); dur = cycles / f_max.
RankTable upward_rank(const TaskGraph &g, std::span<const double> workload, double f_max);

struct HeftOptions {
    bool insertion = true;      // fill the earliest idle gap that fits
    bool charge_local_comm = false;  // charge comm between tasks on the same processor
};

struct HeftSchedule {
    Assignment assignment;
    std::vector<double> start;
    std::vector<double> finish;
    std::vector<TaskIndex> priority;  // dispatch order
    double makespan = 0.0;
};

/**
 * HEFT on K identical processors at f_max. Tasks are dispatched in
 * decreasing upward rank (ties by ascending id, never ahead of a parent) and
 * placed on the processor giving the earliest finish time.
 */
HeftSchedule heft_schedule(const TaskGraph &g, std::span<const double> workload, std::size_t processors,
                           double f_max, const HeftOptions &opts = {});

Assignment heft_assign(const TaskGraph &g, std::span<const double> workload, std::size_t processors,
                       double f_max, const HeftOptions &opts = {});

/// `assign <task> proc=<k> slot=<i>`, sorted by processor then slot.
std::string format_assignment(const TaskGraph &g, const Assignment &a);
Assignment parse_assignment(const TaskGraph &g, std::string_view text, std::size_t processors);

}  // namespace impsched
