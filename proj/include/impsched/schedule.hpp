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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "impsched/energy.hpp"
#include "impsched/imprecision.hpp"
#include "impsched/listsched.hpp"
#include "impsched/lp.hpp"
#include "impsched/taskgraph.hpp"

namespace impsched {

/// Timed, frequency-split schedule in SI units.
struct Schedule {
    Assignment assignment;
    std::vector<double> start;                // seconds
    std::vector<std::vector<double>> cycles;  // [task][frequency index]
    std::vector<double> optional_cycles;      // executed optional cycles o_u, every task

    double total_cycles(TaskIndex u) const;
    double duration(TaskIndex u, const FrequencySet &fs) const;
    double finish(TaskIndex u, const FrequencySet &fs) const { return start[u] + duration(u, fs); }
    double task_energy(TaskIndex u, const PowerModel &pm, const FrequencySet &fs) const;
    double total_energy(const PowerModel &pm, const FrequencySet &fs) const;
    double makespan(const FrequencySet &fs) const;
    /// Mean exit precision from `optional_cycles`.
    double qos(const TaskGraph &g) const;
    /// Idle processor time before the makespan, for the static-energy audit.
    double idle_time(const FrequencySet &fs) const;
};

/**
 * Which cycle counts a schedule has to honour.
 *
 *   labeled      non-exit: sum N = W from the labeling; exit: sum N = M' + o
 *   initial      non-exit: sum N = M + O; exit: sum N = M + o
 *   precise      every task: sum N = M + O
 *   input_error  every task: sum N = M + m * min(1, sum of parent errors) + o
 */
enum class ContractKind { labeled, initial, precise, input_error };
std::string_view to_string(ContractKind k);
ContractKind parse_contract_kind(std::string_view s);

struct WorkloadContract {
    ContractKind kind = ContractKind::precise;
    EffectiveWorkloads workloads;  // labeled only
};

/// LP plus the maps from schedule quantities to its columns.
///
/// Internal units: mega-cycles, milliseconds and millijoules.
struct ScheduleProgram {
    lp::LinearProgram lp;
    WorkloadContract contract;
    Assignment assignment;
    std::vector<int> start_var;
    std::vector<std::vector<int>> cycle_var;
    std::vector<int> optional_var;         // -1 when the optional part is fixed
    std::vector<double> optional_fixed;    // cycles
    int energy_row = -1;
};

inline constexpr double kCyclesPerUnit = 1e6;   // one LP cycle unit
inline constexpr double kSecondsPerUnit = 1e-3;  // one LP time unit
inline constexpr double kJoulesPerUnit = 1e-3;   // one LP energy unit

/// Maximize QoS for the labeled graph on a fixed assignment.
ScheduleProgram build_qos_lp(const TaskGraph &g, const EffectiveWorkloads &wl, const Assignment &asg,
                             const PowerModel &pm, const FrequencySet &fs, double eps_max, double deadline);

/// Minimum energy to run every task fully precisely; the optimum is eps*.
ScheduleProgram build_min_energy_lp(const TaskGraph &g, const Assignment &asg, const PowerModel &pm,
                                    const FrequencySet &fs, double deadline);

/// Maximize QoS with the initial workloads on non-exit tasks.
ScheduleProgram build_baseline_lp(const TaskGraph &g, const Assignment &asg, const PowerModel &pm,
                                  const FrequencySet &fs, double eps_max, double deadline);

Schedule extract_schedule(const ScheduleProgram &prog, const lp::Solution &sol);
/// Objective value of a QoS LP or the energy (J) of a min-energy LP.
double objective_in_si(const ScheduleProgram &prog, const lp::Solution &sol);

struct VerificationCheck {
    std::string name;
    bool passed = true;
    double margin = 0.0;  // worst slack; negative means violated
    std::string detail;   // offending task or edge
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    double energy = 0.0;
    double qos = 0.0;
    double makespan = 0.0;

    bool ok() const;
    const VerificationCheck *find(std::string_view name) const;
    const VerificationCheck *first_failure() const;
    std::string summary() const;
};

struct VerifyOptions {
    double relative_tolerance = 1e-7;
};

/**
 * Recomputes every schedule constraint from raw task data: assignment,
 * non-negativity, workloads, optional range, deadline, precedence with
 * communication, same-processor non-overlap and the energy budget.
 */
VerificationReport verify_schedule(const TaskGraph &g, const Schedule &sched, const Assignment &asg,
                                   const PowerModel &pm, const FrequencySet &fs, double eps_max,
                                   double deadline, const WorkloadContract &contract,
                                   const VerifyOptions &opts = {});

struct ScheduleHeader {
    std::string method;
    WorkloadContract contract;
    double deadline = 0.0;
    double eps_max = 0.0;
    std::vector<double> frequencies;
};

/**
 * Text form:
 *
 *   schedule v1
 *   method <name>
 *   contract <kind>
 *   deadline <s>
 *   eps_max <J>
 *   freqs_hz <f1> <f2> ...
 *   procs <K>
 *   workload <id> mandatory=<c> optional=<c>      (labeled contract only)
 *   run <id> proc=<k> slot=<i> start=<s> opt=<c> cycles=<c1>,<c2>,...
 */
void write_schedule(std::ostream &os, const TaskGraph &g, const Schedule &s, const ScheduleHeader &h);
Schedule read_schedule(std::istream &is, const TaskGraph &g, ScheduleHeader &h);

}  // namespace impsched
