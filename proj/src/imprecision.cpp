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

#include "impsched/imprecision.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace impsched {

double output_error(double total_optional, double executed_optional) {
    if (!(total_optional > 0.0)) throw std::domain_error("output_error: O must be positive");
    if (!(executed_optional >= 0.0 && executed_optional <= total_optional)) {
        throw std::domain_error("output_error: o outside [0, O]");
    }
    return 1.0 - executed_optional / total_optional;
}

double input_error(std::span<const double> parent_output_errors) {
    double sum = 0.0;
    for (double e : parent_output_errors) {
        if (!(e >= 0.0 && e <= 1.0)) throw std::domain_error("input_error: output error outside [0, 1]");
        sum += e;
    }
    return std::min(1.0, sum);
}

double mandatory_extension(double scaling_factor, double input_error) {
    if (!(input_error >= 0.0 && input_error <= 1.0)) {
        throw std::domain_error("mandatory_extension: input error outside [0, 1]");
    }
    if (!(scaling_factor >= 0.0)) throw std::domain_error("mandatory_extension: negative scaling factor");
    return scaling_factor * input_error;
}

double precision(double threshold, double total_optional, double executed_optional) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::domain_error("precision: P_T outside [0, 1]");
    if (!(total_optional > 0.0)) throw std::domain_error("precision: O must be positive");
    if (!(executed_optional >= 0.0 && executed_optional <= total_optional)) {
        throw std::domain_error("precision: o outside [0, O]");
    }
    return threshold + (1.0 - threshold) * (executed_optional / total_optional);
}

double qos(std::span<const double> exit_precisions) {
    if (exit_precisions.empty()) throw std::domain_error("qos: empty exit set");
    double sum = 0.0;
    for (double p : exit_precisions) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("qos: precision outside [0, 1]");
        sum += p;
    }
    return sum / static_cast<double>(exit_precisions.size());
}

bool is_labelable(const TaskGraph &g, TaskIndex u) {
    return !g.is_exit(u) && g.task(u).optional > kPlaceholderOptional;
}

Labeling make_labeling(const TaskGraph &g, const std::vector<std::optional<bool>> &precise) {
    if (precise.size() != g.size()) throw std::invalid_argument("labeling size mismatch");
    Labeling lab;
    lab.precise = precise;
    lab.extended.assign(g.size(), false);
    for (TaskIndex u = 0; u < g.size(); ++u) {
        for (const Adjacent &p : g.parents(u)) {
            if (precise[p.task] == false) lab.extended[u] = true;
        }
    }
    return lab;
}

void check_labeling(const TaskGraph &g, const Labeling &lab) {
    if (lab.precise.size() != g.size() || lab.extended.size() != g.size()) {
        throw std::invalid_argument("labeling size does not match graph");
    }
    for (TaskIndex u = 0; u < g.size(); ++u) {
        const std::string &id = g.task(u).id;
        if (g.is_exit(u) && lab.precise[u].has_value()) {
            throw std::invalid_argument("exit task " + id + " carries a precise label");
        }
        if (!g.is_exit(u) && !lab.precise[u].has_value()) {
            throw std::invalid_argument("non-exit task " + id + " is unlabeled");
        }
        bool expect = false;
        for (const Adjacent &p : g.parents(u)) expect = expect || lab.precise[p.task] == false;
        if (lab.extended[u] != expect) {
            throw std::invalid_argument("extension flag of task " + id + " inconsistent with its parents");
        }
    }
}

EffectiveWorkloads effective_workloads(const TaskGraph &g, const Labeling &lab) {
    check_labeling(g, lab);
    EffectiveWorkloads w;
    w.mandatory.resize(g.size());
    w.optional_fixed.assign(g.size(), 0);
    w.total.resize(g.size());
    for (TaskIndex u = 0; u < g.size(); ++u) {
        const Task &t = g.task(u);
        w.mandatory[u] = t.mandatory + (lab.extended[u] ? t.extension : 0);
        if (!g.is_exit(u) && *lab.precise[u]) w.optional_fixed[u] = t.optional;
        w.total[u] = w.mandatory[u] + w.optional_fixed[u];
    }
    return w;
}

namespace {

// Objective straight from per-task decisions; extensions derived on the fly.
Cycles objective_of(const TaskGraph &g, const std::vector<std::optional<bool>> &precise) {
    Cycles total = 0;
    for (TaskIndex u = 0; u < g.size(); ++u) {
        const Task &t = g.task(u);
        bool ext = false;
        for (const Adjacent &p : g.parents(u)) ext = ext || precise[p.task] == false;
        total += t.mandatory + (ext ? t.extension : 0);
        if (!g.is_exit(u) && precise[u] == true) total += t.optional;
    }
    return total;
}

class LabelState {
  public:
    explicit LabelState(const TaskGraph &g) : g_(g), precise_(g.size()), imprecise_parents_(g.size(), 0) {
        for (TaskIndex u = 0; u < g.size(); ++u) {
            if (!g.is_exit(u)) precise_[u] = true;
        }
    }

    LabelState(const TaskGraph &g, const Labeling &lab) : g_(g), precise_(lab.precise), imprecise_parents_(g.size(), 0) {
        for (TaskIndex u = 0; u < g.size(); ++u) {
            if (precise_[u] == false) {
                for (const Adjacent &c : g.children(u)) ++imprecise_parents_[c.task];
            }
        }
    }

    bool precise(TaskIndex u) const { return precise_[u] == true; }
    bool extended(TaskIndex u) const { return imprecise_parents_[u] > 0; }

    void mark_imprecise(TaskIndex u) {
        if (precise_[u] == false) return;
        precise_[u] = false;
        for (const Adjacent &c : g_.children(u)) ++imprecise_parents_[c.task];
    }

    // Extensions p would cause that no other parent already causes.
    std::vector<Cycles> intact_child_extensions(TaskIndex p) const {
        std::vector<Cycles> out;
        for (const Adjacent &c : g_.children(p)) {
            if (!extended(c.task)) out.push_back(g_.task(c.task).extension);
        }
        return out;
    }

    std::size_t intact_children(TaskIndex p) const {
        std::size_t n = 0;
        for (const Adjacent &c : g_.children(p)) n += extended(c.task) ? 0 : 1;
        return n;
    }

    const std::vector<std::optional<bool>> &decisions() const { return precise_; }

  private:
    const TaskGraph &g_;
    std::vector<std::optional<bool>> precise_;
    std::vector<std::size_t> imprecise_parents_;
};

std::vector<TaskIndex> sorted_by_id(const TaskGraph &g, std::span<const Adjacent> adj) {
    std::vector<TaskIndex> out;
    for (const Adjacent &a : adj) out.push_back(a.task);
    std::sort(out.begin(), out.end(), [&g](TaskIndex a, TaskIndex b) { return g.id_less(a, b); });
    return out;
}

}  // namespace

Cycles reduction_objective(const TaskGraph &g, const Labeling &lab) {
    check_labeling(g, lab);
    return objective_of(g, lab.precise);
}

bool base_case1_decision(Cycles parent_optional, std::span<const Cycles> child_extensions) {
    if (parent_optional <= 0) throw std::domain_error("base_case1_decision: O must be positive");
    const Cycles sum = std::accumulate(child_extensions.begin(), child_extensions.end(), Cycles{0});
    return sum > parent_optional;
}

Labeling forward_pass(const TaskGraph &g, ForwardPassTrace *trace) {
    if (!is_normalized(g)) throw std::invalid_argument("forward_pass: graph must have exactly one source");
    const auto order = topological_order(g);
    LabelState st(g);
    ForwardPassTrace local;

    for (TaskIndex p : order) {
        if (!is_labelable(g, p)) continue;
        if (!base_case1_decision(g.task(p).optional, st.intact_child_extensions(p))) st.mark_imprecise(p);
    }

    // Update pass over extended multi-parent children, each visited once.
    std::vector<bool> visited(g.size(), false);
    while (true) {
        std::vector<TaskIndex> marked;
        for (TaskIndex c : order) {
            if (!visited[c] && g.parents(c).size() >= 2 && st.extended(c)) marked.push_back(c);
        }
        if (marked.empty()) break;
        if (++local.update_rounds > g.size()) {
            throw std::logic_error("forward_pass: update rounds exceeded task count");
        }
        bool changed = false;
        for (TaskIndex c : marked) {
            visited[c] = true;
            for (TaskIndex p : sorted_by_id(g, g.parents(c))) {
                if (!st.precise(p) || !is_labelable(g, p)) continue;
                if (!base_case1_decision(g.task(p).optional, st.intact_child_extensions(p))) {
                    st.mark_imprecise(p);
                    ++local.label_changes;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }

    if (trace) *trace = local;
    return make_labeling(g, st.decisions());
}

Labeling backward_pass(const TaskGraph &g, const Labeling &lab) {
    check_labeling(g, lab);
    const auto order = topological_order(g);
    LabelState st(g, lab);

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const TaskIndex t = *it;
        if (g.parents(t).size() < 2) continue;

        std::vector<TaskIndex> spp;
        for (const Adjacent &p : g.parents(t)) {
            if (st.precise(p.task) && is_labelable(g, p.task)) spp.push_back(p.task);
        }
        if (spp.empty()) continue;
        std::vector<std::size_t> intact(g.size(), 0);
        for (TaskIndex p : spp) intact[p] = st.intact_children(p);
        std::sort(spp.begin(), spp.end(), [&](TaskIndex a, TaskIndex b) {
            if (intact[a] != intact[b]) return intact[a] < intact[b];
            return g.id_less(a, b);
        });

        const Cycles base = objective_of(g, st.decisions());
        Cycles best_reduction = 0;
        std::size_t best_len = 0;
        auto trial = st.decisions();
        for (std::size_t k = 0; k < spp.size(); ++k) {
            trial[spp[k]] = false;
            const Cycles reduction = base - objective_of(g, trial);
            // strict: on equal reductions the shorter prefix wins
            if (reduction > best_reduction) {
                best_reduction = reduction;
                best_len = k + 1;
            }
        }
        for (std::size_t k = 0; k < best_len; ++k) st.mark_imprecise(spp[k]);
    }
    return make_labeling(g, st.decisions());
}

LabelResult imp_label(const TaskGraph &g, ForwardPassTrace *trace) {
    Labeling lab = backward_pass(g, forward_pass(g, trace));
    EffectiveWorkloads w = effective_workloads(g, lab);
    return {std::move(lab), std::move(w)};
}

std::string format_labeling(const TaskGraph &g, const Labeling &lab) {
    check_labeling(g, lab);
    std::vector<TaskIndex> ids(g.size());
    std::iota(ids.begin(), ids.end(), TaskIndex{0});
    std::sort(ids.begin(), ids.end(), [&g](TaskIndex a, TaskIndex b) { return g.id_less(a, b); });
    std::ostringstream os;
    for (TaskIndex u : ids) {
        os << "label " << g.task(u).id << " precise=";
        if (lab.precise[u]) {
            os << (*lab.precise[u] ? '1' : '0');
        } else {
            os << '-';
        }
        os << " extended=" << (lab.extended[u] ? '1' : '0') << "\n";
    }
    return os.str();
}

Labeling parse_labeling(const TaskGraph &g, std::string_view text) {
    Labeling lab;
    lab.precise.assign(g.size(), std::nullopt);
    lab.extended.assign(g.size(), false);
    std::vector<bool> seen(g.size(), false);
    for (std::string_view line : detail::split_lines(text)) {
        const auto toks = detail::tokenize(line);
        if (toks.empty() || toks[0].text != "label") continue;
        if (toks.size() != 4) throw std::invalid_argument("malformed label line: " + std::string(line));
        const TaskIndex u = g.index_of(toks[1].text);
        const auto p = toks[2].text;
        const auto e = toks[3].text;
        if (p == "precise=1") {
            lab.precise[u] = true;
        } else if (p == "precise=0") {
            lab.precise[u] = false;
        } else if (p != "precise=-") {
            throw std::invalid_argument("bad precise field: " + std::string(p));
        }
        if (e != "extended=0" && e != "extended=1") throw std::invalid_argument("bad extended field");
        lab.extended[u] = e == "extended=1";
        seen[u] = true;
    }
    for (TaskIndex u = 0; u < g.size(); ++u) {
        if (!seen[u]) throw std::invalid_argument("no label for task " + g.task(u).id);
    }
    check_labeling(g, lab);
    return lab;
}

}  // namespace impsched
