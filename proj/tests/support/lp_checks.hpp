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

#include <random>
#include <string>

#include "impsched/lp.hpp"

namespace impsched::testing {

// Small random program with mixed bound and row types. Mostly feasible (rows
// built around a hidden point); some are made infeasible or unbounded.
lp::LinearProgram random_program(std::mt19937_64 &rng);

struct OptimalityReport {
    bool ok = true;
    double primal_violation = 0.0;
    double dual_violation = 0.0;
    double slackness_violation = 0.0;
    std::string message;
};

// Primal feasibility, dual feasibility of the reported duals and
// complementary slackness, all recomputed from the raw program.
OptimalityReport check_optimality(const lp::LinearProgram &prog, const lp::Solution &s, double tol);

}  // namespace impsched::testing
