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

#include "impsched/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace impsched {

std::string_view to_string(MandatoryRegime r) {
    switch (r) {
    case MandatoryRegime::low: return "man_low";
    case MandatoryRegime::medium: return "man_med";
    case MandatoryRegime::high: return "man_high";
    case MandatoryRegime::mixed: return "man_mixed";
    }
    return "man_mixed";
}

std::optional<MandatoryRegime> parse_regime(std::string_view s) {
    if (s == "man_low" || s == "low") return MandatoryRegime::low;
    if (s == "man_med" || s == "med" || s == "medium") return MandatoryRegime::medium;
    if (s == "man_high" || s == "high") return MandatoryRegime::high;
    if (s == "man_mixed" || s == "mixed") return MandatoryRegime::mixed;
    return std::nullopt;
}

std::pair<double, double> mandatory_fraction_range(MandatoryRegime r) {
    switch (r) {
    case MandatoryRegime::low: return {0.2, 0.4};
    case MandatoryRegime::medium: return {0.4, 0.6};
    case MandatoryRegime::high: return {0.6, 0.8};
    case MandatoryRegime::mixed: return {0.2, 0.8};
    }
    return {0.2, 0.8};
}

namespace {

// Platform-independent draws; std::uniform_*_distribution is implementation defined.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t below(std::size_t n) {
        return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
    }

  private:
    std::mt19937_64 engine_;
};

std::string task_name(std::size_t i, std::size_t n) {
    std::size_t width = 2;
    for (std::size_t v = n > 0 ? n - 1 : 0; v >= 100; v /= 10) ++width;
    std::string digits = std::to_string(i);
    return "t" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

constexpr std::size_t kParentWindow = 8;

}  // namespace

TaskGraph generate_random_graph(const GeneratorParams &p) {
    if (p.n_tasks == 0) throw std::invalid_argument("n_tasks must be positive");
    if (p.max_in_degree < 1 || p.max_out_degree < 1) {
        throw std::invalid_argument("degree caps must be at least 1");
    }
    if (!(p.mean_initial_workload >= 2.0)) throw std::invalid_argument("mean_initial_workload must be >= 2 cycles");
    if (!(p.comm_min >= 0.0) || p.comm_max < p.comm_min) throw std::invalid_argument("invalid comm_range");

    Stream rng(p.seed);
    const auto [lo, hi] = mandatory_fraction_range(p.regime);
    TaskGraph g;
    std::vector<std::size_t> out_degree(p.n_tasks, 0);

    for (std::size_t v = 0; v < p.n_tasks; ++v) {
        const double u_work = rng.uniform();
        const double u_man = rng.uniform();
        const double u_ext = rng.uniform();
        const double u_pt = rng.uniform();

        const auto w_init = std::max<Cycles>(2, std::llround((0.5 + u_work) * p.mean_initial_workload));
        const double wd = static_cast<double>(w_init);
        const auto m_lo = static_cast<Cycles>(std::ceil(lo * wd));
        const auto m_hi = std::min<Cycles>(static_cast<Cycles>(std::floor(hi * wd)), w_init - 1);
        const Cycles mandatory = std::clamp<Cycles>(std::llround((lo + (hi - lo) * u_man) * wd), m_lo, m_hi);

        Task t;
        t.id = task_name(v, p.n_tasks);
        t.mandatory = mandatory;
        t.optional = w_init - mandatory;
        t.extension = std::llround(u_ext * 2.0 * static_cast<double>(mandatory));
        t.precision_threshold = u_pt;
        g.add_task(std::move(t));

        if (v == 0) continue;

        std::vector<std::size_t> candidates;
        for (std::size_t c = v > kParentWindow ? v - kParentWindow : 0; c < v; ++c) {
            if (out_degree[c] < p.max_out_degree) candidates.push_back(c);
        }
        // The previous task has no children yet, so the window is never empty.
        const std::size_t cap = std::min(p.max_in_degree, candidates.size());
        std::size_t k = 1;
        if (cap > 1 && rng.uniform() < 0.4) k = 2 + rng.below(cap - 1);

        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t pick = j + rng.below(candidates.size() - j);
            std::swap(candidates[j], candidates[pick]);
        }
        std::sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k));
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t parent = candidates[j];
            g.add_edge(parent, v, rng.uniform(p.comm_min, p.comm_max));
            ++out_degree[parent];
        }
    }

    g.set_deadline(compute_deadline(g, p.f_max, p.deadline_includes_extension));
    return g;
}

}  // namespace impsched
