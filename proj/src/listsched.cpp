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

#include "impsched/listsched.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace impsched {

void Assignment::validate(std::size_t n_tasks) const {
    if (proc_of.size() != n_tasks) throw std::invalid_argument("assignment does not cover every task");
    std::vector<int> seen(n_tasks, 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
        for (TaskIndex u : order[k]) {
            if (u >= n_tasks) throw std::invalid_argument("assignment references unknown task");
            if (proc_of[u] != k) throw std::invalid_argument("assignment order and processor map disagree");
            ++seen[u];
        }
    }
    for (int s : seen) {
        if (s != 1) throw std::invalid_argument("task missing or repeated in assignment order");
    }
}

std::vector<double> scheduling_workloads(const TaskGraph &g, const EffectiveWorkloads &w) {
    std::vector<double> out(g.size());
    for (TaskIndex u = 0; u < g.size(); ++u) {
        out[u] = g.is_exit(u) ? static_cast<double>(w.mandatory[u] + g.task(u).optional)
                              : static_cast<double>(w.total[u]);
    }
    return out;
}

std::vector<double> initial_workloads(const TaskGraph &g) {
    std::vector<double> out(g.size());
    for (TaskIndex u = 0; u < g.size(); ++u) out[u] = static_cast<double>(g.task(u).initial_workload());
    return out;
}

RankTable upward_rank(const TaskGraph &g, std::span<const double> workload, double f_max) {
    if (workload.size() != g.size()) throw std::invalid_argument("upward_rank: missing workload entries");
    if (!(f_max > 0.0)) throw std::invalid_argument("upward_rank: f_max must be positive");
    const auto order = topological_order(g);
    RankTable t;
    t.rank.assign(g.size(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        double tail = 0.0;
        for (const Adjacent &c : g.children(*it)) tail = std::max(tail, c.comm + t.rank[c.task]);
        t.rank[*it] = workload[*it] / f_max + tail;
    }
    return t;
}

namespace {

struct Interval {
    double start, finish;
};

double earliest_slot(const std::vector<Interval> &busy, double ready, double dur, bool insertion) {
    if (!insertion) return busy.empty() ? ready : std::max(ready, busy.back().finish);
    double t = ready;
    for (const Interval &iv : busy) {
        if (t + dur <= iv.start) return t;
        t = std::max(t, iv.finish);
    }
    return t;
}

}  // namespace

HeftSchedule heft_schedule(const TaskGraph &g, std::span<const double> workload, std::size_t processors,
                           double f_max, const HeftOptions &opts) {
    if (processors < 1) throw std::invalid_argument("heft: need at least one processor");
    const RankTable ranks = upward_rank(g, workload, f_max);

    std::vector<TaskIndex> list(g.size());
    std::iota(list.begin(), list.end(), TaskIndex{0});
    std::sort(list.begin(), list.end(), [&](TaskIndex a, TaskIndex b) {
        if (ranks.rank[a] != ranks.rank[b]) return ranks.rank[a] > ranks.rank[b];
        return g.id_less(a, b);
    });

    HeftSchedule s;
    s.assignment.proc_of.assign(g.size(), 0);
    s.assignment.order.assign(processors, {});
    s.start.assign(g.size(), 0.0);
    s.finish.assign(g.size(), 0.0);
    std::vector<std::vector<Interval>> busy(processors);
    std::vector<bool> placed(g.size(), false);

    while (s.priority.size() < g.size()) {
        // First listed task whose parents are all placed; this is the list
        // itself unless zero-length ties put a child ahead of its parent.
        auto pick = std::find_if(list.begin(), list.end(), [&](TaskIndex u) {
            if (placed[u]) return false;
            for (const Adjacent &p : g.parents(u)) {
                if (!placed[p.task]) return false;
            }
            return true;
        });
        const TaskIndex u = *pick;
        const double dur = workload[u] / f_max;

        double best_finish = std::numeric_limits<double>::infinity();
        double best_start = 0.0;
        std::size_t best_proc = 0;
        for (std::size_t k = 0; k < processors; ++k) {
            double ready = 0.0;
            for (const Adjacent &p : g.parents(u)) {
                const bool local = s.assignment.proc_of[p.task] == k;
                const double c = (local && !opts.charge_local_comm) ? 0.0 : p.comm;
                ready = std::max(ready, s.finish[p.task] + c);
            }
            const double start = earliest_slot(busy[k], ready, dur, opts.insertion);
            if (start + dur < best_finish) {
                best_finish = start + dur;
                best_start = start;
                best_proc = k;
            }
        }

        s.assignment.proc_of[u] = best_proc;
        s.start[u] = best_start;
        s.finish[u] = best_finish;
        auto &iv = busy[best_proc];
        iv.insert(std::upper_bound(iv.begin(), iv.end(), best_start,
                                   [](double t, const Interval &x) { return t < x.start; }),
                  Interval{best_start, best_finish});
        placed[u] = true;
        s.priority.push_back(u);
        s.makespan = std::max(s.makespan, best_finish);
    }

    for (TaskIndex u : s.priority) s.assignment.order[s.assignment.proc_of[u]].push_back(u);
    for (auto &seq : s.assignment.order) {
        std::stable_sort(seq.begin(), seq.end(), [&](TaskIndex a, TaskIndex b) {
            if (s.start[a] != s.start[b]) return s.start[a] < s.start[b];
            return s.finish[a] < s.finish[b];
        });
    }
    return s;
}

Assignment heft_assign(const TaskGraph &g, std::span<const double> workload, std::size_t processors, double f_max,
                       const HeftOptions &opts) {
    return heft_schedule(g, workload, processors, f_max, opts).assignment;
}

std::string format_assignment(const TaskGraph &g, const Assignment &a) {
    std::ostringstream os;
    for (std::size_t k = 0; k < a.order.size(); ++k) {
        for (std::size_t i = 0; i < a.order[k].size(); ++i) {
            os << "assign " << g.task(a.order[k][i]).id << " proc=" << k << " slot=" << i << "\n";
        }
    }
    return os.str();
}

Assignment parse_assignment(const TaskGraph &g, std::string_view text, std::size_t processors) {
    std::vector<std::map<std::size_t, TaskIndex>> slots(processors);
    Assignment a;
    a.proc_of.assign(g.size(), 0);
    for (std::string_view line : detail::split_lines(text)) {
        const auto toks = detail::tokenize(line);
        if (toks.empty() || toks[0].text != "assign") continue;
        if (toks.size() < 4 || !toks[2].text.starts_with("proc=") || !toks[3].text.starts_with("slot=")) {
            throw std::invalid_argument("malformed assign line: " + std::string(line));
        }
        const TaskIndex u = g.index_of(toks[1].text);
        const std::size_t k = std::stoul(std::string(toks[2].text.substr(5)));
        const std::size_t slot = std::stoul(std::string(toks[3].text.substr(5)));
        if (k >= processors) throw std::invalid_argument("processor index out of range");
        if (!slots[k].emplace(slot, u).second) throw std::invalid_argument("duplicate slot");
        a.proc_of[u] = k;
    }
    a.order.assign(processors, {});
    for (std::size_t k = 0; k < processors; ++k) {
        for (const auto &[slot, u] : slots[k]) a.order[k].push_back(u);
    }
    a.validate(g.size());
    return a;
}

}  // namespace impsched
