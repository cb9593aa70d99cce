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

#include <string>
#include <vector>

#include "impsched/schedule.hpp"

namespace impsched::testing {

// A corrupted copy of a valid schedule and the check that must catch it.
struct Fault {
    std::string description;
    std::string expected_check;
    Schedule schedule;
    Assignment assignment;
    double eps_max = 0.0;
};

// Ten distinct corruptions of `good`, which must verify under `eps_max`.
std::vector<Fault> inject_faults(const TaskGraph &g, const Schedule &good, const PowerModel &pm,
                                 const FrequencySet &fs, double eps_max);

}  // namespace impsched::testing
