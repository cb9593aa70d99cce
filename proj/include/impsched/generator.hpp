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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "impsched/taskgraph.hpp"

namespace impsched {

/// Share of the initial workload that is base mandatory work.
enum class MandatoryRegime { low, medium, high, mixed };

std::string_view to_string(MandatoryRegime r);
std::optional<MandatoryRegime> parse_regime(std::string_view s);

/// [lo, hi] fraction of W_init drawn for M under each regime.
std::pair<double, double> mandatory_fraction_range(MandatoryRegime r);

struct GeneratorParams {
    std::size_t n_tasks = 30;
    std::size_t max_in_degree = 6;
    std::size_t max_out_degree = 6;
    double mean_initial_workload = 2e6;  // cycles
    MandatoryRegime regime = MandatoryRegime::mixed;
    double comm_min = 0.4e-3;  // seconds
    double comm_max = 0.6e-3;
    std::uint64_t seed = 1;
    double f_max = 2.1e9;  // Hz, used for the deadline
    bool deadline_includes_extension = true;
};

/**
 * TGFF-style random DAG with a single source.
 *
 * Tasks are created in index order; each new task draws its parents from a
 * window of recent tasks that still have out-degree capacity, so edges always
 * point forward and task 0 is the only source. All random draws are taken in
 * a fixed sequence from one mt19937_64 stream, so two regimes with the same
 * seed share topology, W_init, P_T and communication costs.
 */
TaskGraph generate_random_graph(const GeneratorParams &p);

}  // namespace impsched
