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

// Independent schedule checker. Everything is recomputed from the task data;
// nothing here reads the LP.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "impsched/schedule.hpp"

namespace impsched {

namespace {

constexpr double kHuge = std::numeric_limits<double>::infinity();

struct Tracker {
    VerificationCheck check;

    explicit Tracker(std::string name) {
        check.name = std::move(name);
        check.margin = kHuge;
    }

    // margin >= -tol passes
    void observe(double margin, double tol, const std::string &where) {
        if (margin < check.margin) {
            check.margin = margin;
            check.detail = where;
        }
        if (margin < -tol) check.passed = false;
    }

    VerificationCheck done() {
        if (check.margin == kHuge) check.margin = 0.0;
        if (check.passed) check.detail.clear();
        return check;
    }
};

}  // namespace

bool VerificationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerificationCheck &c) { return c.passed; });
}

const VerificationCheck *VerificationReport::find(std::string_view name) const {
    for (const auto &c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const VerificationCheck *VerificationReport::first_failure() const {
    for (const auto &c : checks) {
        if (!c.passed) return &c;
    }
    return nullptr;
}

std::string VerificationReport::summary() const {
    std::ostringstream os;
    for (const auto &c : checks) {
        os << (c.passed ? "ok   " : "FAIL ") << c.name << " margin=" << c.margin;
        if (!c.detail.empty()) os << " at " << c.detail;
        os << "\n";
    }
    os << "energy_J=" << energy << " qos=" << qos << " makespan_s=" << makespan << "\n";
    return os.str();
}

VerificationReport verify_schedule(const TaskGraph &g, const Schedule &sched, const Assignment &asg,
                                   const PowerModel &pm, const FrequencySet &fs, double eps_max,
                                   double deadline, const WorkloadContract &contract, const VerifyOptions &opts) {
    VerificationReport rep;
    const double rel = opts.relative_tolerance;
    const std::size_t n = g.size();
    const std::size_t nf = fs.size();

    Tracker shape("shape");
    const bool sizes_ok = sched.start.size() == n && sched.cycles.size() == n && sched.optional_cycles.size() == n &&
                          std::all_of(sched.cycles.begin(), sched.cycles.end(),
                                      [&](const auto &c) { return c.size() == nf; });
    shape.observe(sizes_ok ? 0.0 : -1.0, 0.0, sizes_ok ? "" : "schedule dimensions do not match the graph");
    rep.checks.push_back(shape.done());
    if (!sizes_ok) return rep;

    Tracker assign("assignment");
    {
        std::vector<int> count(n, 0);
        bool fine = asg.proc_of.size() == n;
        for (std::size_t k = 0; k < asg.order.size() && fine; ++k) {
            for (TaskIndex u : asg.order[k]) {
                if (u >= n || asg.proc_of[u] != k) {
                    fine = false;
                    break;
                }
                ++count[u];
            }
        }
        for (std::size_t u = 0; u < n && fine; ++u) {
            if (count[u] != 1) {
                assign.observe(-1.0, 0.0, g.task(u).id);
                fine = false;
            }
        }
        if (!fine && assign.check.passed) assign.observe(-1.0, 0.0, "inconsistent processor map");
        if (fine) assign.observe(0.0, 0.0, "");
    }
    const bool asg_ok = assign.check.passed;
    rep.checks.push_back(assign.done());

    // Durations and per-task cycle sums, straight from the raw numbers.
    std::vector<double> dur(n, 0.0), sum(n, 0.0);
    Tracker nonneg("nonnegativity");
    for (std::size_t u = 0; u < n; ++u) {
        nonneg.observe(sched.start[u], 0.0, g.task(u).id + " start");
        for (std::size_t i = 0; i < nf; ++i) {
            const double c = sched.cycles[u][i];
            nonneg.observe(c, 0.0, g.task(u).id + " cycles@" + std::to_string(i));
            sum[u] += c;
            dur[u] += c / fs[i];
        }
    }
    rep.checks.push_back(nonneg.done());

    Tracker range("optional_range");
    Tracker work("workload");
    for (std::size_t u = 0; u < n; ++u) {
        const Task &t = g.task(u);
        const double big_o = static_cast<double>(t.optional);
        const double o = sched.optional_cycles[u];
        const double otol = rel * std::max(1.0, big_o);
        range.observe(std::min(o, big_o - o), otol, t.id);

        double required = 0.0;
        double fixed_o = -1.0;  // required value of o when the contract pins it
        switch (contract.kind) {
        case ContractKind::labeled:
            if (contract.workloads.mandatory.size() != n || contract.workloads.optional_fixed.size() != n) {
                work.observe(-kHuge, 0.0, "labeled contract without workloads");
                continue;
            }
            required = static_cast<double>(contract.workloads.mandatory[u]);
            if (!g.is_exit(u)) fixed_o = static_cast<double>(contract.workloads.optional_fixed[u]);
            break;
        case ContractKind::initial:
            required = static_cast<double>(t.mandatory);
            if (!g.is_exit(u)) fixed_o = big_o;
            break;
        case ContractKind::precise:
            required = static_cast<double>(t.mandatory);
            fixed_o = big_o;
            break;
        case ContractKind::input_error: {
            double err = 0.0;
            for (const Adjacent &p : g.parents(u)) {
                const double po = static_cast<double>(g.task(p.task).optional);
                err += 1.0 - std::clamp(sched.optional_cycles[p.task], 0.0, po) / po;
            }
            required = static_cast<double>(t.mandatory) + static_cast<double>(t.extension) * std::min(1.0, err);
            break;
        }
        }
        if (fixed_o >= 0.0) {
            work.observe(-std::abs(o - fixed_o), otol, t.id + " optional part");
            required += fixed_o;
        } else {
            required += o;
        }
        work.observe(-std::abs(sum[u] - required), rel * std::max(1.0, required), t.id);
    }
    rep.checks.push_back(range.done());
    rep.checks.push_back(work.done());

    const double ttol = rel * deadline;
    Tracker dl("deadline");
    double makespan = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        const double f = sched.start[u] + dur[u];
        makespan = std::max(makespan, f);
        dl.observe(deadline - f, ttol, g.task(u).id);
    }
    rep.checks.push_back(dl.done());

    Tracker prec("precedence");
    for (const Edge &e : g.edges()) {
        const double margin = sched.start[e.dst] - (sched.start[e.src] + dur[e.src] + e.comm);
        prec.observe(margin, ttol, g.task(e.src).id + "->" + g.task(e.dst).id);
    }
    rep.checks.push_back(prec.done());

    Tracker overlap("non_overlap");
    if (asg_ok) {
        for (const auto &seq : asg.order) {
            for (std::size_t a = 0; a < seq.size(); ++a) {
                for (std::size_t b = a + 1; b < seq.size(); ++b) {
                    const TaskIndex u = seq[a], v = seq[b];
                    const double fu = sched.start[u] + dur[u], fv = sched.start[v] + dur[v];
                    const double margin = std::max(sched.start[v] - fu, sched.start[u] - fv);
                    overlap.observe(margin, ttol, g.task(u).id + "|" + g.task(v).id);
                }
            }
        }
    } else {
        overlap.observe(-kHuge, 0.0, "assignment invalid");
    }
    rep.checks.push_back(overlap.done());

    Tracker energy("energy");
    double total = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
        const double f = fs[i];
        const double per_cycle = pm.alpha * std::pow(f, pm.beta - 1.0) + pm.gamma + pm.delta / f;
        double cycles_at_i = 0.0;
        for (std::size_t u = 0; u < n; ++u) cycles_at_i += sched.cycles[u][i];
        total += cycles_at_i * per_cycle;
    }
    energy.observe(eps_max - total, rel * std::max(eps_max, 1e-12), "total");
    rep.checks.push_back(energy.done());

    double q = 0.0;
    std::size_t exits = 0;
    for (std::size_t u = 0; u < n; ++u) {
        if (!g.children(u).empty()) continue;
        const Task &t = g.task(u);
        const double big_o = static_cast<double>(t.optional);
        const double o = std::clamp(sched.optional_cycles[u], 0.0, big_o);
        q += t.precision_threshold + (1.0 - t.precision_threshold) * o / big_o;
        ++exits;
    }
    rep.energy = total;
    rep.qos = exits ? q / static_cast<double>(exits) : 0.0;
    rep.makespan = makespan;
    return rep;
}

}  // namespace impsched
