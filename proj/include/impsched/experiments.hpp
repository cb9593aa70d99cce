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
#include <optional>
#include <string>
#include <vector>

#include "impsched/config.hpp"
#include "impsched/imprecision.hpp"
#include "impsched/listsched.hpp"
#include "impsched/milp.hpp"
#include "impsched/schedule.hpp"
#include "impsched/taskgraph.hpp"

namespace impsched {

HeftOptions heft_options(const SweepSettings &s);

/// Outcome of one method at one energy budget.
struct RunResult {
    bool feasible = false;
    bool verified = false;      // feasible schedule passed the independent checker
    bool numerical_failure = false;
    std::string status;         // solver status text
    double qos = 0.0;
    double energy = 0.0;        // J
    double makespan = 0.0;      // s
    double runtime = 0.0;       // s
    std::optional<double> gap;  // milp only
    std::optional<std::size_t> nodes;
    std::optional<Schedule> schedule;
    WorkloadContract contract;
    std::optional<VerificationReport> report;
};

struct EpsilonStar {
    bool feasible = false;
    double energy = 0.0;  // J
    Assignment assignment;
    std::optional<Schedule> schedule;
    std::optional<VerificationReport> report;
    double runtime = 0.0;
};

/// Min-energy LP on the HEFT assignment for the initial workloads.
EpsilonStar compute_epsilon_star(const TaskGraph &g, const Platform &pf, const HeftOptions &heft = {});

/// Budget-independent part of the proposed method: labels and assignment.
struct ProposedPlan {
    TaskGraph graph;  // normalized
    LabelResult labels;
    Assignment assignment;
    double prep_time = 0.0;
};
ProposedPlan plan_proposed(const TaskGraph &g, const Platform &pf, const HeftOptions &heft = {});
RunResult run_proposed(const ProposedPlan &plan, const Platform &pf, double eps_max);

struct BaselinePlan {
    TaskGraph graph;  // normalized
    Assignment assignment;
    double prep_time = 0.0;
};
BaselinePlan plan_baseline(const TaskGraph &g, const Platform &pf, const HeftOptions &heft = {});
RunResult run_baseline(const BaselinePlan &plan, const Platform &pf, double eps_max);

/// Exact reference on the normalized graph.
RunResult run_milp(const TaskGraph &g, const Platform &pf, double eps_max, const BnbOptions &opts = {});

struct SweepRow {
    std::string graph;
    Method method = Method::proposed;
    double eps_ratio = 1.0;
    RunResult result;
};

/// Budgets 1, 1 - r, 1 - 2r, ... as exact multiples of the resolution r.
std::vector<double> sweep_ratios(double resolution);

struct SweepOutcome {
    std::optional<double> epsilon_star;
    std::vector<SweepRow> rows;  // per method, descending ratio
};

/**
 * Every method walks the budgets from eps* downwards and stops a fixed
 * number of points past its first infeasible budget. Feasible rows have
 * passed verify_schedule. Methods run on `jobs` worker threads; rows are
 * merged in method order.
 */
SweepOutcome run_sweep(const std::string &graph_id, const TaskGraph &g, const Config &cfg);

inline constexpr const char *kCsvHeader = "graph,method,eps_ratio,feasible,qos,energy_J,makespan_s,runtime_s,gap,nodes";
void write_csv_row(std::ostream &os, const SweepRow &row);

}  // namespace impsched
