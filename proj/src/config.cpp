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

#include "impsched/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "impsched/graph_io.hpp"
#include "text_util.hpp"

namespace impsched {

std::string_view to_string(Method m) {
    switch (m) {
    case Method::proposed: return "proposed";
    case Method::baseline: return "baseline";
    case Method::milp: return "milp";
    }
    return "proposed";
}

Method parse_method(std::string_view s) {
    if (s == "proposed") return Method::proposed;
    if (s == "baseline") return Method::baseline;
    if (s == "milp") return Method::milp;
    throw std::invalid_argument("unknown method: " + std::string(s));
}

std::vector<Method> parse_method_list(std::string_view s) {
    std::vector<Method> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        const auto item = detail::trim(s.substr(0, comma));
        if (!item.empty()) {
            const Method m = parse_method(item);
            if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        }
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    if (out.empty()) throw std::invalid_argument("empty method list");
    return out;
}

namespace {

const std::map<std::string, std::vector<std::string>, std::less<>> kKeys = {
    {"platform", {"alpha", "beta", "gamma", "delta", "freqs_ghz", "procs"}},
    {"generator",
     {"n_tasks", "max_in_degree", "max_out_degree", "mean_workload", "regime", "comm_min_ms", "comm_max_ms", "seed",
      "deadline_includes_extension"}},
    {"sweep", {"resolution", "methods", "time_limit", "points_past_infeasible", "insertion", "lp_comm", "jobs"}},
};

double to_double(const std::string &key, const std::string &v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception &) {
        throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
    }
}

std::uint64_t to_uint(const std::string &key, const std::string &v) {
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        const auto d = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception &) {
        throw std::invalid_argument("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
    }
}

bool to_bool(const std::string &key, const std::string &v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: '" + key + "' expects a boolean, got '" + v + "'");
}

}  // namespace

std::string section_of(std::string_view key) {
    for (const auto &[section, keys] : kKeys) {
        for (const auto &k : keys) {
            if (k == key) return section;
        }
    }
    throw std::invalid_argument("unknown config key: " + std::string(key));
}

std::vector<std::string> known_config_keys() {
    std::vector<std::string> out;
    for (const auto &[section, keys] : kKeys) out.insert(out.end(), keys.begin(), keys.end());
    return out;
}

ConfigEntries parse_config_entries(std::string_view text) {
    ConfigEntries out;
    std::string section;
    const auto lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(i + 1, 1, "unterminated section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            if (!kKeys.contains(section)) throw ParseError(i + 1, 2, "unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(i + 1, 1, "expected key = value");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (section.empty()) throw ParseError(i + 1, 1, "key '" + key + "' outside a section");
        const auto &keys = kKeys.find(section)->second;
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ParseError(i + 1, 1, "unknown key '" + key + "' in [" + section + "]");
        }
        out[section + "." + key] = value;
    }
    return out;
}

ConfigEntries read_config_entries(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_entries(buf.str());
}

Config make_config(const ConfigEntries &entries) {
    Config c;
    auto scaled = c.platform.power.to_ghz_mw();
    std::vector<double> freqs_ghz;
    for (double f : c.platform.freqs.values()) freqs_ghz.push_back(f / 1e9);
    bool power_changed = false;

    for (const auto &[full, value] : entries) {
        const auto dot = full.find('.');
        const std::string key = dot == std::string::npos ? full : full.substr(dot + 1);
        if (key == "alpha") {
            scaled.alpha = to_double(key, value);
            power_changed = true;
        } else if (key == "beta") {
            scaled.beta = to_double(key, value);
            power_changed = true;
        } else if (key == "gamma") {
            scaled.gamma = to_double(key, value);
            power_changed = true;
        } else if (key == "delta") {
            scaled.delta = to_double(key, value);
            power_changed = true;
        } else if (key == "freqs_ghz") {
            freqs_ghz.clear();
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find_first_of(", ");
                const auto item = detail::trim(rest.substr(0, comma));
                if (!item.empty()) freqs_ghz.push_back(to_double(key, std::string(item)));
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
            }
        } else if (key == "procs") {
            c.platform.processors = to_uint(key, value);
        } else if (key == "n_tasks") {
            c.generator.n_tasks = to_uint(key, value);
        } else if (key == "max_in_degree") {
            c.generator.max_in_degree = to_uint(key, value);
        } else if (key == "max_out_degree") {
            c.generator.max_out_degree = to_uint(key, value);
        } else if (key == "mean_workload") {
            c.generator.mean_initial_workload = to_double(key, value);
        } else if (key == "regime") {
            const auto r = parse_regime(value);
            if (!r) throw std::invalid_argument("config: unknown regime '" + value + "'");
            c.generator.regime = *r;
        } else if (key == "comm_min_ms") {
            c.generator.comm_min = to_double(key, value) * 1e-3;
        } else if (key == "comm_max_ms") {
            c.generator.comm_max = to_double(key, value) * 1e-3;
        } else if (key == "seed") {
            c.generator.seed = to_uint(key, value);
        } else if (key == "deadline_includes_extension") {
            c.generator.deadline_includes_extension = to_bool(key, value);
        } else if (key == "resolution") {
            c.sweep.resolution = to_double(key, value);
        } else if (key == "methods") {
            c.sweep.methods = parse_method_list(value);
        } else if (key == "time_limit") {
            c.sweep.time_limit = to_double(key, value);
        } else if (key == "points_past_infeasible") {
            c.sweep.points_past_infeasible = to_uint(key, value);
        } else if (key == "insertion") {
            c.sweep.insertion = to_bool(key, value);
        } else if (key == "lp_comm") {
            c.sweep.lp_comm = to_bool(key, value);
        } else if (key == "jobs") {
            c.sweep.jobs = to_uint(key, value);
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }

    if (power_changed) c.platform.power = PowerModel::from_ghz_mw(scaled.alpha, scaled.beta, scaled.gamma, scaled.delta);
    c.platform.power.validate();
    c.platform.freqs = FrequencySet::from_ghz(freqs_ghz);
    if (c.platform.processors < 1) throw std::invalid_argument("config: procs must be at least 1");
    if (!(c.sweep.resolution > 0.0 && c.sweep.resolution < 1.0)) {
        throw std::invalid_argument("config: resolution must lie in (0, 1)");
    }
    if (!(c.sweep.time_limit > 0.0)) throw std::invalid_argument("config: time_limit must be positive");
    if (c.sweep.jobs < 1) c.sweep.jobs = 1;
    if (c.generator.max_in_degree < 1 || c.generator.max_out_degree < 1) {
        throw std::invalid_argument("config: degree caps must be at least 1");
    }
    if (!(c.generator.mean_initial_workload > 0.0)) throw std::invalid_argument("config: mean_workload must be positive");
    if (c.generator.comm_min < 0.0 || c.generator.comm_max < c.generator.comm_min) {
        throw std::invalid_argument("config: comm range must satisfy 0 <= comm_min_ms <= comm_max_ms");
    }
    c.generator.f_max = c.platform.freqs.max();
    return c;
}

}  // namespace impsched
