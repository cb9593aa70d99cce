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

#include <vector>

#include "impsched/lp.hpp"

namespace impsched::testing {

enum class RefStatus { optimal, infeasible, unbounded };

struct RefSolution {
    RefStatus status = RefStatus::infeasible;
    double objective = 0.0;  // in the program's own sense, constant included
    std::vector<double> x;
};

// Dense two-phase tableau simplex with Bland's rule on the standard form of
// `lp`. Slow and simple on purpose; shares nothing with the library solver.
RefSolution reference_solve(const lp::LinearProgram &lp);

}  // namespace impsched::testing
