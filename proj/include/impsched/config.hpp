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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "impsched/energy.hpp"
#include "impsched/generator.hpp"

namespace impsched {

enum class Method { proposed, baseline, milp };
std::string_view to_string(Method m);
Method parse_method(std::string_view s);
/// Comma separated, e.g. "proposed,baseline".
std::vector<Method> parse_method_list(std::string_view s);

struct Platform {
    PowerModel power = default_power_model();
    FrequencySet freqs = default_frequencies();
    std::size_t processors = 4;
};

struct SweepSettings {
    double resolution = 0.05;
    std::vector<Method> methods{Method::proposed, Method::baseline};
    double time_limit = 600.0;  // per MILP solve, seconds
    std::size_t points_past_infeasible = 2;
    bool insertion = true;
    bool lp_comm = false;
    std::size_t jobs = 1;
};

struct Config {
    Platform platform;
    GeneratorParams generator;
    SweepSettings sweep;
};

/// Flat `key = value` entries keyed by `section.key`.
using ConfigEntries = std::map<std::string, std::string>;

/**
 * INI-style text:
 *
 *   [platform]  alpha beta gamma delta (GHz / mW scale), freqs_ghz, procs
 *   [generator] n_tasks max_in_degree max_out_degree mean_workload regime
 *               comm_min_ms comm_max_ms seed deadline_includes_extension
 *   [sweep]     resolution methods time_limit points_past_infeasible
 *               insertion lp_comm jobs
 *
 * '#' and ';' start comments. Unknown sections or keys are errors.
 */
ConfigEntries parse_config_entries(std::string_view text);
ConfigEntries read_config_entries(const std::filesystem::path &path);

/// Section that owns a bare key such as `procs`; throws for unknown keys.
std::string section_of(std::string_view key);
std::vector<std::string> known_config_keys();

/// Defaults overlaid with `entries`.
Config make_config(const ConfigEntries &entries);

}  // namespace impsched
