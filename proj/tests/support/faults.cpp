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

#include "support/faults.hpp"

#include <algorithm>
#include <stdexcept>

namespace impsched::testing {

std::vector<Fault> inject_faults(const TaskGraph &g, const Schedule &good, const PowerModel &pm,
                                 const FrequencySet &fs, double eps_max) {
    std::vector<Fault> out;
    auto add = [&](std::string what, std::string check, Schedule s, double budget) {
        out.push_back({std::move(what), std::move(check), std::move(s), good.assignment, budget});
    };
    if (g.edges().empty()) throw std::invalid_argument("inject_faults: graph needs an edge");

    const Edge &e = g.edges()[g.edges().size() / 2];
    Schedule s = good;
    s.start[e.dst] = std::max(0.0, good.finish(e.src, fs) + e.comm - 1e-3);
    add("child start 1 ms early", "precedence", s, eps_max);

    TaskIndex inner = 0;
    while (inner < g.size() && (g.is_exit(inner) || g.task(inner).initial_workload() < 10)) ++inner;
    if (inner == g.size()) throw std::invalid_argument("inject_faults: no non-exit task");
    s = good;
    for (auto &c : s.cycles[inner]) c *= 0.9;
    add("non-exit task short of cycles", "workload", s, eps_max);

    const TaskIndex exit_task = g.exits().front();
    s = good;
    for (auto &c : s.cycles[exit_task]) c *= 1.0 + static_cast<double>(g.task(exit_task).optional) * 2.0 /
                                                       std::max(1.0, good.total_cycles(exit_task));
    add("exit task with surplus cycles", "workload", s, eps_max * 10.0);

    add("budget below consumption", "energy", good, 0.98 * good.total_energy(pm, fs));

    s = good;
    for (TaskIndex u = 0; u < g.size(); ++u) {
        double total = 0.0;
        for (double c : s.cycles[u]) total += c;
        std::fill(s.cycles[u].begin(), s.cycles[u].end(), 0.0);
        s.cycles[u].back() = total;
    }
    add("all cycles moved to f_max", "energy", s, eps_max * std::min(1.0, 0.999 * s.total_energy(pm, fs) / eps_max));

    s = good;
    s.start[exit_task] = g.deadline();
    add("exit starts at the deadline", "deadline", s, eps_max);

    for (const auto &seq : good.assignment.order) {
        if (seq.size() < 2) continue;
        s = good;
        s.start[seq[1]] = s.start[seq[0]];
        add("two tasks overlap on a processor", "non_overlap", s, eps_max);
        break;
    }

    s = good;
    s.cycles[exit_task][0] = -5.0;
    add("negative cycle count", "nonnegativity", s, eps_max);

    s = good;
    s.optional_cycles[exit_task] = static_cast<double>(g.task(exit_task).optional) * 1.5;
    add("optional cycles beyond O", "optional_range", s, eps_max);

    Assignment bad = good.assignment;
    for (auto &seq : bad.order) {
        if (!seq.empty()) {
            seq.pop_back();
            break;
        }
    }
    out.push_back({"task missing from the assignment", "assignment", good, bad, eps_max});
    return out;
}

}  // namespace impsched::testing
