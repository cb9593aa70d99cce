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

#include "impsched/schedule.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "impsched/graph_io.hpp"
#include "text_util.hpp"

namespace impsched {

double Schedule::total_cycles(TaskIndex u) const {
    double s = 0.0;
    for (double c : cycles[u]) s += c;
    return s;
}

double Schedule::duration(TaskIndex u, const FrequencySet &fs) const {
    double d = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) d += cycles[u][i] / fs[i];
    return d;
}

double Schedule::task_energy(TaskIndex u, const PowerModel &pm, const FrequencySet &fs) const {
    double e = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) e += cycles[u][i] * energy_per_cycle(pm, fs[i]);
    return e;
}

double Schedule::total_energy(const PowerModel &pm, const FrequencySet &fs) const {
    double e = 0.0;
    for (std::size_t u = 0; u < cycles.size(); ++u) e += task_energy(u, pm, fs);
    return e;
}

double Schedule::makespan(const FrequencySet &fs) const {
    double t = 0.0;
    for (std::size_t u = 0; u < start.size(); ++u) t = std::max(t, finish(u, fs));
    return t;
}

double Schedule::qos(const TaskGraph &g) const {
    std::vector<double> p;
    for (TaskIndex u : g.exits()) {
        const Task &t = g.task(u);
        const double o = std::clamp(optional_cycles[u], 0.0, static_cast<double>(t.optional));
        p.push_back(precision(t.precision_threshold, static_cast<double>(t.optional), o));
    }
    return impsched::qos(p);
}

double Schedule::idle_time(const FrequencySet &fs) const {
    const double span = makespan(fs);
    double idle = 0.0;
    for (const auto &seq : assignment.order) {
        double busy = 0.0;
        for (TaskIndex u : seq) busy += duration(u, fs);
        idle += std::max(0.0, span - busy);
    }
    return idle;
}

std::string_view to_string(ContractKind k) {
    switch (k) {
    case ContractKind::labeled: return "labeled";
    case ContractKind::initial: return "initial";
    case ContractKind::precise: return "precise";
    case ContractKind::input_error: return "input_error";
    }
    return "precise";
}

ContractKind parse_contract_kind(std::string_view s) {
    if (s == "labeled") return ContractKind::labeled;
    if (s == "initial") return ContractKind::initial;
    if (s == "precise") return ContractKind::precise;
    if (s == "input_error") return ContractKind::input_error;
    throw std::invalid_argument("unknown workload contract: " + std::string(s));
}

namespace {

struct TaskWork {
    double base = 0.0;        // cycles that must run besides the optional part
    double optional_max = 0;  // O
    bool optional_free = false;
    double optional_fixed = 0.0;
};

ScheduleProgram build_common(const TaskGraph &g, const std::vector<TaskWork> &work, const Assignment &asg,
                             const PowerModel &pm, const FrequencySet &fs, const double *eps_max, double deadline,
                             bool maximize_qos) {
    if (g.empty()) throw std::invalid_argument("schedule LP: empty graph");
    asg.validate(g.size());
    pm.validate();
    if (!(deadline > 0.0)) throw std::invalid_argument("schedule LP: deadline must be positive");

    ScheduleProgram p;
    p.assignment = asg;
    auto &lp = p.lp;
    const std::size_t n = g.size();
    const std::size_t nf = fs.size();
    const double horizon = deadline / kSecondsPerUnit;

    std::vector<double> ms_per_unit(nf), mj_per_unit(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        ms_per_unit[i] = kCyclesPerUnit / fs[i] / kSecondsPerUnit;
        mj_per_unit[i] = kCyclesPerUnit * energy_per_cycle(pm, fs[i]) / kJoulesPerUnit;
    }

    p.start_var.resize(n);
    p.cycle_var.assign(n, std::vector<int>(nf, -1));
    p.optional_var.assign(n, -1);
    p.optional_fixed.assign(n, 0.0);
    for (TaskIndex u = 0; u < n; ++u) {
        const std::string &id = g.task(u).id;
        p.start_var[u] = lp.add_variable("S_" + id, 0.0, lp::kInf);
        for (std::size_t i = 0; i < nf; ++i) {
            p.cycle_var[u][i] = lp.add_variable("N_" + id + "_" + std::to_string(i), 0.0, lp::kInf,
                                                maximize_qos ? 0.0 : mj_per_unit[i]);
        }
        if (work[u].optional_free) {
            p.optional_var[u] = lp.add_variable("o_" + id, 0.0, work[u].optional_max / kCyclesPerUnit);
        } else {
            p.optional_fixed[u] = work[u].optional_fixed;
        }
    }

    auto duration_terms = [&](TaskIndex u) {
        std::vector<lp::Term> t{{p.start_var[u], 1.0}};
        for (std::size_t i = 0; i < nf; ++i) t.push_back({p.cycle_var[u][i], ms_per_unit[i]});
        return t;
    };

    for (TaskIndex u = 0; u < n; ++u) {
        std::vector<lp::Term> t;
        for (std::size_t i = 0; i < nf; ++i) t.push_back({p.cycle_var[u][i], 1.0});
        double rhs = work[u].base;
        if (p.optional_var[u] >= 0) {
            t.push_back({p.optional_var[u], -1.0});
        } else {
            rhs += p.optional_fixed[u];
        }
        lp.add_eq("work_" + g.task(u).id, std::move(t), rhs / kCyclesPerUnit);
    }

    if (eps_max != nullptr) {
        std::vector<lp::Term> t;
        for (TaskIndex u = 0; u < n; ++u) {
            for (std::size_t i = 0; i < nf; ++i) t.push_back({p.cycle_var[u][i], mj_per_unit[i]});
        }
        p.energy_row = lp.add_le("energy", std::move(t), *eps_max / kJoulesPerUnit);
    }

    for (TaskIndex u = 0; u < n; ++u) lp.add_le("deadline_" + g.task(u).id, duration_terms(u), horizon);

    for (const Edge &e : g.edges()) {
        auto t = duration_terms(e.src);
        t.push_back({p.start_var[e.dst], -1.0});
        lp.add_le("prec_" + g.task(e.src).id + "_" + g.task(e.dst).id, std::move(t), -e.comm / kSecondsPerUnit);
    }

    for (const auto &seq : asg.order) {
        for (std::size_t k = 1; k < seq.size(); ++k) {
            auto t = duration_terms(seq[k - 1]);
            t.push_back({p.start_var[seq[k]], -1.0});
            lp.add_le("seq_" + g.task(seq[k - 1]).id + "_" + g.task(seq[k]).id, std::move(t), 0.0);
        }
    }

    if (maximize_qos) {
        lp.set_sense(lp::Sense::maximize);
        const auto exits = g.exits();
        const double w = 1.0 / static_cast<double>(exits.size());
        double constant = 0.0;
        for (TaskIndex u : exits) {
            const Task &t = g.task(u);
            constant += w * t.precision_threshold;
            if (p.optional_var[u] >= 0) {
                lp.set_cost(p.optional_var[u],
                            w * (1.0 - t.precision_threshold) * kCyclesPerUnit / static_cast<double>(t.optional));
            } else {
                constant += w * (1.0 - t.precision_threshold) * p.optional_fixed[u] / static_cast<double>(t.optional);
            }
        }
        lp.set_objective_constant(constant);
    } else {
        lp.set_sense(lp::Sense::minimize);
    }
    return p;
}

}  // namespace

ScheduleProgram build_qos_lp(const TaskGraph &g, const EffectiveWorkloads &wl, const Assignment &asg,
                             const PowerModel &pm, const FrequencySet &fs, double eps_max, double deadline) {
    if (wl.mandatory.size() != g.size() || wl.optional_fixed.size() != g.size()) {
        throw std::invalid_argument("build_qos_lp: workloads do not match the graph");
    }
    std::vector<TaskWork> work(g.size());
    for (TaskIndex u = 0; u < g.size(); ++u) {
        work[u].base = static_cast<double>(wl.mandatory[u]);
        work[u].optional_max = static_cast<double>(g.task(u).optional);
        if (g.is_exit(u)) {
            work[u].optional_free = true;
        } else {
            work[u].optional_fixed = static_cast<double>(wl.optional_fixed[u]);
        }
    }
    auto p = build_common(g, work, asg, pm, fs, &eps_max, deadline, true);
    p.contract = {ContractKind::labeled, wl};
    return p;
}

ScheduleProgram build_min_energy_lp(const TaskGraph &g, const Assignment &asg, const PowerModel &pm,
                                    const FrequencySet &fs, double deadline) {
    std::vector<TaskWork> work(g.size());
    for (TaskIndex u = 0; u < g.size(); ++u) {
        work[u].base = static_cast<double>(g.task(u).mandatory);
        work[u].optional_max = work[u].optional_fixed = static_cast<double>(g.task(u).optional);
    }
    auto p = build_common(g, work, asg, pm, fs, nullptr, deadline, false);
    p.contract = {ContractKind::precise, {}};
    return p;
}

ScheduleProgram build_baseline_lp(const TaskGraph &g, const Assignment &asg, const PowerModel &pm,
                                  const FrequencySet &fs, double eps_max, double deadline) {
    std::vector<TaskWork> work(g.size());
    for (TaskIndex u = 0; u < g.size(); ++u) {
        work[u].base = static_cast<double>(g.task(u).mandatory);
        work[u].optional_max = static_cast<double>(g.task(u).optional);
        if (g.is_exit(u)) {
            work[u].optional_free = true;
        } else {
            work[u].optional_fixed = work[u].optional_max;
        }
    }
    auto p = build_common(g, work, asg, pm, fs, &eps_max, deadline, true);
    p.contract = {ContractKind::initial, {}};
    return p;
}

Schedule extract_schedule(const ScheduleProgram &prog, const lp::Solution &sol) {
    if (static_cast<int>(sol.x.size()) != prog.lp.num_variables()) {
        throw std::invalid_argument("extract_schedule: solution does not belong to this program");
    }
    const std::size_t n = prog.start_var.size();
    Schedule s;
    s.assignment = prog.assignment;
    s.start.resize(n);
    s.cycles.assign(n, {});
    s.optional_cycles.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        s.start[u] = std::max(0.0, sol.x[prog.start_var[u]]) * kSecondsPerUnit;
        for (int v : prog.cycle_var[u]) s.cycles[u].push_back(std::max(0.0, sol.x[v]) * kCyclesPerUnit);
        if (prog.optional_var[u] >= 0) {
            const auto &var = prog.lp.variable(prog.optional_var[u]);
            s.optional_cycles[u] = std::clamp(sol.x[prog.optional_var[u]], var.lower, var.upper) * kCyclesPerUnit;
        } else {
            s.optional_cycles[u] = prog.optional_fixed[u];
        }
    }
    return s;
}

double objective_in_si(const ScheduleProgram &prog, const lp::Solution &sol) {
    return prog.lp.sense() == lp::Sense::maximize ? sol.objective : sol.objective * kJoulesPerUnit;
}

// ---------------------------------------------------------------------------
// Text form

void write_schedule(std::ostream &os, const TaskGraph &g, const Schedule &s, const ScheduleHeader &h) {
    os << "schedule v1\n";
    os << "method " << (h.method.empty() ? "unknown" : h.method) << "\n";
    os << "contract " << to_string(h.contract.kind) << "\n";
    os << "deadline " << format_real(h.deadline) << "\n";
    os << "eps_max " << format_real(h.eps_max) << "\n";
    os << "freqs_hz";
    for (double f : h.frequencies) os << " " << format_real(f);
    os << "\n";
    os << "procs " << s.assignment.processors() << "\n";
    std::vector<TaskIndex> by_id(g.size());
    for (TaskIndex u = 0; u < g.size(); ++u) by_id[u] = u;
    std::sort(by_id.begin(), by_id.end(), [&](TaskIndex a, TaskIndex b) { return g.id_less(a, b); });
    if (h.contract.kind == ContractKind::labeled) {
        for (TaskIndex u : by_id) {
            os << "workload " << g.task(u).id << " mandatory=" << h.contract.workloads.mandatory[u]
               << " optional=" << h.contract.workloads.optional_fixed[u] << "\n";
        }
    }
    std::vector<std::size_t> slot(g.size(), 0);
    for (const auto &seq : s.assignment.order) {
        for (std::size_t i = 0; i < seq.size(); ++i) slot[seq[i]] = i;
    }
    for (TaskIndex u : by_id) {
        os << "run " << g.task(u).id << " proc=" << s.assignment.proc_of[u] << " slot=" << slot[u]
           << " start=" << format_real(s.start[u]) << " opt=" << format_real(s.optional_cycles[u]) << " cycles=";
        for (std::size_t i = 0; i < s.cycles[u].size(); ++i) {
            os << (i ? "," : "") << format_real(s.cycles[u][i]);
        }
        os << "\n";
    }
}

namespace {

double parse_double(std::string_view text, std::size_t line) {
    try {
        std::size_t used = 0;
        const std::string s(text);
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception &) {
        throw ParseError(line, 1, "bad number '" + std::string(text) + "'");
    }
}

std::string_view value_of(const detail::Token &tok, std::string_view key, std::size_t line) {
    if (!tok.text.starts_with(key) || tok.text.size() <= key.size() || tok.text[key.size()] != '=') {
        throw ParseError(line, tok.column, "expected " + std::string(key) + "=");
    }
    return tok.text.substr(key.size() + 1);
}

}  // namespace

Schedule read_schedule(std::istream &is, const TaskGraph &g, ScheduleHeader &h) {
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    const auto lines = detail::split_lines(text);

    Schedule s;
    s.start.assign(g.size(), 0.0);
    s.cycles.assign(g.size(), {});
    s.optional_cycles.assign(g.size(), 0.0);
    s.assignment.proc_of.assign(g.size(), 0);
    std::vector<bool> seen(g.size(), false);
    std::vector<std::map<std::size_t, TaskIndex>> slots;
    std::size_t procs = 0;
    bool header = false;
    h = {};
    h.contract.workloads.mandatory.assign(g.size(), 0);
    h.contract.workloads.optional_fixed.assign(g.size(), 0);
    h.contract.workloads.total.assign(g.size(), 0);

    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t line = ln + 1;
        const auto toks = detail::tokenize(lines[ln]);
        if (toks.empty()) continue;
        const std::string_view kw = toks[0].text;
        if (!header) {
            if (kw != "schedule" || toks.size() != 2 || toks[1].text != "v1") {
                throw ParseError(line, toks[0].column, "expected header 'schedule v1'");
            }
            header = true;
            continue;
        }
        auto need = [&](std::size_t k) {
            if (toks.size() < k) throw ParseError(line, toks.back().column, "missing fields");
        };
        if (kw == "method") {
            need(2);
            h.method = std::string(toks[1].text);
        } else if (kw == "contract") {
            need(2);
            try {
                h.contract.kind = parse_contract_kind(toks[1].text);
            } catch (const std::invalid_argument &e) {
                throw ParseError(line, toks[1].column, e.what());
            }
        } else if (kw == "deadline") {
            need(2);
            h.deadline = parse_double(toks[1].text, line);
        } else if (kw == "eps_max") {
            need(2);
            h.eps_max = parse_double(toks[1].text, line);
        } else if (kw == "freqs_hz") {
            for (std::size_t k = 1; k < toks.size(); ++k) h.frequencies.push_back(parse_double(toks[k].text, line));
        } else if (kw == "procs") {
            need(2);
            procs = static_cast<std::size_t>(parse_double(toks[1].text, line));
            if (procs < 1) throw ParseError(line, toks[1].column, "procs must be positive");
            slots.assign(procs, {});
        } else if (kw == "workload") {
            need(4);
            const auto u = g.find(toks[1].text);
            if (!u) throw ParseError(line, toks[1].column, "unknown task '" + std::string(toks[1].text) + "'");
            h.contract.workloads.mandatory[*u] = static_cast<Cycles>(parse_double(value_of(toks[2], "mandatory", line), line));
            h.contract.workloads.optional_fixed[*u] = static_cast<Cycles>(parse_double(value_of(toks[3], "optional", line), line));
            h.contract.workloads.total[*u] = h.contract.workloads.mandatory[*u] + h.contract.workloads.optional_fixed[*u];
        } else if (kw == "run") {
            need(7);
            if (procs == 0) throw ParseError(line, toks[0].column, "'procs' must precede run lines");
            const auto u = g.find(toks[1].text);
            if (!u) throw ParseError(line, toks[1].column, "unknown task '" + std::string(toks[1].text) + "'");
            if (seen[*u]) throw ParseError(line, toks[1].column, "task listed twice");
            seen[*u] = true;
            const auto k = static_cast<std::size_t>(parse_double(value_of(toks[2], "proc", line), line));
            const auto slot = static_cast<std::size_t>(parse_double(value_of(toks[3], "slot", line), line));
            if (k >= procs) throw ParseError(line, toks[2].column, "processor out of range");
            if (!slots[k].emplace(slot, *u).second) throw ParseError(line, toks[3].column, "duplicate slot");
            s.assignment.proc_of[*u] = k;
            s.start[*u] = parse_double(value_of(toks[4], "start", line), line);
            s.optional_cycles[*u] = parse_double(value_of(toks[5], "opt", line), line);
            std::string_view list = value_of(toks[6], "cycles", line);
            while (!list.empty()) {
                const auto comma = list.find(',');
                s.cycles[*u].push_back(parse_double(list.substr(0, comma), line));
                if (comma == std::string_view::npos) break;
                list.remove_prefix(comma + 1);
            }
        } else {
            throw ParseError(line, toks[0].column, "unknown keyword '" + std::string(kw) + "'");
        }
    }
    if (!header) throw ParseError(1, 1, "empty schedule");
    for (TaskIndex u = 0; u < g.size(); ++u) {
        if (!seen[u]) throw ParseError(lines.size(), 1, "no run line for task '" + g.task(u).id + "'");
        if (s.cycles[u].size() != h.frequencies.size()) {
            throw ParseError(lines.size(), 1, "cycle list of '" + g.task(u).id + "' does not match freqs_hz");
        }
    }
    s.assignment.order.assign(procs, {});
    for (std::size_t k = 0; k < procs; ++k) {
        for (const auto &[slot, u] : slots[k]) s.assignment.order[k].push_back(u);
    }
    return s;
}

}  // namespace impsched
