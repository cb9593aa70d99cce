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

#include "impsched/taskgraph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <tuple>

namespace impsched {

TaskIndex TaskGraph::add_task(Task task) {
    if (index_.contains(task.id)) {
        throw GraphError("duplicate task id '" + task.id + "'");
    }
    const TaskIndex u = tasks_.size();
    index_.emplace(task.id, u);
    tasks_.push_back(std::move(task));
    children_.emplace_back();
    parents_.emplace_back();
    return u;
}

void TaskGraph::add_edge(TaskIndex src, TaskIndex dst, double comm) {
    if (src >= tasks_.size() || dst >= tasks_.size()) {
        throw GraphError("edge endpoint out of range");
    }
    if (src == dst) {
        throw GraphError("self-loop on task '" + tasks_[src].id + "'");
    }
    for (const Adjacent &a : children_[src]) {
        if (a.task == dst) {
            throw GraphError("duplicate edge " + tasks_[src].id + " -> " + tasks_[dst].id);
        }
    }
    edges_.push_back({src, dst, comm});
    children_[src].push_back({dst, comm});
    parents_[dst].push_back({src, comm});
}

void TaskGraph::add_edge(std::string_view src, std::string_view dst, double comm) {
    add_edge(index_of(src), index_of(dst), comm);
}

std::vector<TaskIndex> TaskGraph::sources() const {
    std::vector<TaskIndex> out;
    for (TaskIndex u = 0; u < size(); ++u) {
        if (is_source(u)) out.push_back(u);
    }
    return out;
}

std::vector<TaskIndex> TaskGraph::exits() const {
    std::vector<TaskIndex> out;
    for (TaskIndex u = 0; u < size(); ++u) {
        if (is_exit(u)) out.push_back(u);
    }
    return out;
}

std::optional<TaskIndex> TaskGraph::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

TaskIndex TaskGraph::index_of(std::string_view id) const {
    if (auto u = find(id)) return *u;
    throw GraphError("unknown task id '" + std::string(id) + "'");
}

std::optional<double> TaskGraph::comm(TaskIndex src, TaskIndex dst) const {
    for (const Adjacent &a : children_.at(src)) {
        if (a.task == dst) return a.comm;
    }
    return std::nullopt;
}

bool operator==(const TaskGraph &a, const TaskGraph &b) {
    if (a.deadline_ != b.deadline_ || a.size() != b.size() || a.edges_.size() != b.edges_.size()) {
        return false;
    }
    for (const Task &t : a.tasks_) {
        auto u = b.find(t.id);
        if (!u || b.task(*u) != t) return false;
    }
    using Key = std::tuple<std::string, std::string, double>;
    auto keys = [](const TaskGraph &g) {
        std::vector<Key> out;
        for (const Edge &e : g.edges_) out.emplace_back(g.task(e.src).id, g.task(e.dst).id, e.comm);
        std::sort(out.begin(), out.end());
        return out;
    };
    return keys(a) == keys(b);
}

namespace {

// Kahn's algorithm; returns a partial order when the graph has a cycle.
std::vector<TaskIndex> kahn(const TaskGraph &g) {
    std::vector<std::size_t> indeg(g.size());
    for (TaskIndex u = 0; u < g.size(); ++u) indeg[u] = g.parents(u).size();

    auto greater_id = [&g](TaskIndex a, TaskIndex b) { return g.id_less(b, a); };
    std::priority_queue<TaskIndex, std::vector<TaskIndex>, decltype(greater_id)> ready(greater_id);
    for (TaskIndex u = 0; u < g.size(); ++u) {
        if (indeg[u] == 0) ready.push(u);
    }

    std::vector<TaskIndex> order;
    order.reserve(g.size());
    while (!ready.empty()) {
        const TaskIndex u = ready.top();
        ready.pop();
        order.push_back(u);
        for (const Adjacent &c : g.children(u)) {
            if (--indeg[c.task] == 0) ready.push(c.task);
        }
    }
    return order;
}

}  // namespace

ValidationReport validate_graph(const TaskGraph &g) {
    ValidationReport r;
    auto &v = r.violations;

    if (!(g.deadline() > 0.0) || !std::isfinite(g.deadline())) v.push_back("deadline must be positive");

    for (const Task &t : g.tasks()) {
        if (t.mandatory < 0) v.push_back("task " + t.id + ": M < 0");
        if (t.optional <= 0) v.push_back("task " + t.id + ": O must be positive");
        if (t.extension < 0) v.push_back("task " + t.id + ": m < 0");
        if (!(t.precision_threshold >= 0.0 && t.precision_threshold <= 1.0)) {
            v.push_back("task " + t.id + ": PT outside [0,1]");
        }
    }
    for (const Edge &e : g.edges()) {
        if (!(e.comm >= 0.0) || !std::isfinite(e.comm)) {
            v.push_back("edge " + g.task(e.src).id + "->" + g.task(e.dst).id + ": negative comm");
        }
    }

    std::size_t degree_sum = 0;
    for (TaskIndex u = 0; u < g.size(); ++u) {
        const std::size_t in = g.parents(u).size();
        const std::size_t out = g.children(u).size();
        r.max_in_degree = std::max(r.max_in_degree, in);
        r.max_out_degree = std::max(r.max_out_degree, out);
        degree_sum += in + out;
        if (in == 0) ++r.source_count;
        if (out == 0) ++r.exit_count;
    }
    if (!g.empty()) r.mean_degree = static_cast<double>(degree_sum) / static_cast<double>(g.size());

    r.acyclic = kahn(g).size() == g.size();
    if (!r.acyclic) v.push_back("cycle detected");
    if (r.exit_count == 0) v.push_back("no exit tasks");
    return r;
}

std::vector<TaskIndex> topological_order(const TaskGraph &g) {
    auto order = kahn(g);
    if (order.size() != g.size()) throw GraphError("cycle detected");
    return order;
}

bool is_normalized(const TaskGraph &g) { return g.sources().size() == 1; }

TaskGraph normalize_source(const TaskGraph &g) {
    topological_order(g);  // rejects cyclic input
    const auto srcs = g.sources();
    if (srcs.size() <= 1) return g;

    TaskGraph out = g;
    std::string id = "__source";
    for (int k = 1; out.find(id); ++k) id = "__source" + std::to_string(k);
    const TaskIndex d = out.add_task({id, 0, kPlaceholderOptional, 0, 1.0});
    for (TaskIndex s : srcs) out.add_edge(d, s, 0.0);
    return out;
}

std::vector<std::vector<bool>> descendants(const TaskGraph &g) {
    const auto order = topological_order(g);
    std::vector<std::vector<bool>> reach(g.size(), std::vector<bool>(g.size(), false));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        for (const Adjacent &c : g.children(*it)) {
            reach[*it][c.task] = true;
            for (TaskIndex w = 0; w < g.size(); ++w) {
                if (reach[c.task][w]) reach[*it][w] = true;
            }
        }
    }
    return reach;
}

double compute_deadline(const TaskGraph &g, double f_max, bool include_extension) {
    if (!(f_max > 0.0)) throw std::invalid_argument("f_max must be positive");
    const auto order = topological_order(g);
    std::vector<double> finish(g.size(), 0.0);
    double longest = 0.0;
    for (TaskIndex u : order) {
        double ready = 0.0;
        for (const Adjacent &p : g.parents(u)) ready = std::max(ready, finish[p.task] + p.comm);
        const Task &t = g.task(u);
        const Cycles work = t.mandatory + t.optional + (include_extension ? t.extension : 0);
        finish[u] = ready + static_cast<double>(work) / f_max;
        longest = std::max(longest, finish[u]);
    }
    return 2.0 * longest;
}

}  // namespace impsched
