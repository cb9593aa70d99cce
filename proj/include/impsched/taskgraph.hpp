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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace impsched {

/// Processor cycles. Inputs are integral; LP variables over cycles are real.
using Cycles = std::int64_t;

using TaskIndex = std::size_t;

/// Optional workload used for tasks that have no real optional part. Such
/// tasks are never labeled imprecise.
inline constexpr Cycles kPlaceholderOptional = 1;

class GraphError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * A task with an imprecise computation.
 *
 * `mandatory` is the base mandatory workload (error-free inputs), `optional`
 * the total optional workload and `extension` the task-specific scaling factor:
 * the mandatory part grows by `extension * input_error` cycles.
 * `precision_threshold` is the task precision when only the (extended)
 * mandatory part completes.
 */
struct Task {
    std::string id;
    Cycles mandatory = 0;
    Cycles optional = kPlaceholderOptional;
    Cycles extension = 0;
    double precision_threshold = 0.0;

    Cycles initial_workload() const { return mandatory + optional; }
    bool operator==(const Task &) const = default;
};

struct Edge {
    TaskIndex src = 0;
    TaskIndex dst = 0;
    double comm = 0.0;  // seconds
};

struct Adjacent {
    TaskIndex task;
    double comm;
};

/**
 * Directed task graph with a period / hard deadline.
 *
 * Tasks are addressed by dense indices in insertion order; string ids are
 * used for every user-visible ordering (tie-breaks, serialization).
 */
class TaskGraph {
  public:
    TaskGraph() = default;

    TaskIndex add_task(Task task);
    void add_edge(TaskIndex src, TaskIndex dst, double comm);
    void add_edge(std::string_view src, std::string_view dst, double comm);

    std::size_t size() const { return tasks_.size(); }
    bool empty() const { return tasks_.empty(); }

    const Task &task(TaskIndex u) const { return tasks_.at(u); }
    Task &task(TaskIndex u) { return tasks_.at(u); }
    const std::vector<Task> &tasks() const { return tasks_; }
    const std::vector<Edge> &edges() const { return edges_; }

    std::span<const Adjacent> children(TaskIndex u) const { return children_.at(u); }
    std::span<const Adjacent> parents(TaskIndex u) const { return parents_.at(u); }

    bool is_exit(TaskIndex u) const { return children_.at(u).empty(); }
    bool is_source(TaskIndex u) const { return parents_.at(u).empty(); }
    std::vector<TaskIndex> sources() const;
    std::vector<TaskIndex> exits() const;

    std::optional<TaskIndex> find(std::string_view id) const;
    TaskIndex index_of(std::string_view id) const;

    /// Communication cost of edge (src, dst), or nullopt when absent.
    std::optional<double> comm(TaskIndex src, TaskIndex dst) const;

    double deadline() const { return deadline_; }
    void set_deadline(double seconds) { deadline_ = seconds; }

    /// Orders task indices by ascending id.
    bool id_less(TaskIndex a, TaskIndex b) const { return tasks_[a].id < tasks_[b].id; }

    /// Structural equality: same deadline, same tasks by id, same edge set.
    friend bool operator==(const TaskGraph &a, const TaskGraph &b);

  private:
    std::vector<Task> tasks_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Adjacent>> children_;
    std::vector<std::vector<Adjacent>> parents_;
    std::unordered_map<std::string, TaskIndex> index_;
    double deadline_ = 0.0;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool acyclic = true;
    std::size_t source_count = 0;
    std::size_t exit_count = 0;
    std::size_t max_in_degree = 0;
    std::size_t max_out_degree = 0;
    double mean_degree = 0.0;

    bool ok() const { return violations.empty(); }
};

ValidationReport validate_graph(const TaskGraph &g);

/// Kahn's algorithm; ties broken by ascending task id. Throws GraphError on a cycle.
std::vector<TaskIndex> topological_order(const TaskGraph &g);

/// Adds a zero-workload source connected to every source when there is more
/// than one. Returns the graph unchanged otherwise.
TaskGraph normalize_source(const TaskGraph &g);

/// True when `g` has exactly one source.
bool is_normalized(const TaskGraph &g);

/// reachable[u][v]: v is a proper descendant of u.
std::vector<std::vector<bool>> descendants(const TaskGraph &g);

/**
 * Twice the longest source-to-exit path when every task runs its whole
 * workload (M + m + O, or M + O without extensions) at `f_max`, edges
 * contributing their communication cost.
 */
double compute_deadline(const TaskGraph &g, double f_max, bool include_extension = true);

}  // namespace impsched
