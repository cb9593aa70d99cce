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

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "impsched/energy.hpp"

using namespace impsched;

namespace {

const double kGHz = 1e9;
const double kmW = 1e-3;
const std::vector<double> kFreqsGhz{1.01, 1.26, 1.53, 1.81, 2.1};
const std::vector<double> kDynamicMw{430.9, 556.8, 710.7, 896.5, 1118.2};

}  // namespace

TEST_CASE("power model at the platform frequencies") {
    const PowerModel pm = default_power_model();
    for (std::size_t i = 0; i < kFreqsGhz.size(); ++i) {
        const double p = dynamic_power_at(pm, kFreqsGhz[i] * kGHz) / kmW;
        CHECK(std::abs(p - kDynamicMw[i]) / kDynamicMw[i] < 0.01);
    }
    CHECK(power_at(pm, 2.1 * kGHz) / kmW == doctest::Approx(1394.2).epsilon(0.01));
    CHECK(energy_per_cycle(pm, 2.1 * kGHz) == doctest::Approx(1394.2e-3 / 2.1e9).epsilon(0.01));
    const auto s = pm.to_ghz_mw();
    CHECK(s.alpha == doctest::Approx(23.8729));
    CHECK(s.beta == doctest::Approx(3.2941));
    CHECK(s.gamma == doctest::Approx(401.6654));
    CHECK(s.delta == doctest::Approx(276.0));
}

TEST_CASE("power model algebra") {
    const PowerModel cubic{1.0, 3.0, 0.0, 0.0};
    CHECK(power_at(cubic, 2.0) == 8.0);
    CHECK(energy_per_cycle(cubic, 4.0) / energy_per_cycle(cubic, 2.0) == doctest::Approx(4.0));
    const PowerModel pm = default_power_model();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> f(0.5e9, 3e9);
    for (int i = 0; i < 200; ++i) {
        const double x = f(rng);
        CHECK(energy_per_cycle(pm, x) * x == doctest::Approx(power_at(pm, x)).epsilon(1e-14));
        const PowerModel shaped{pm.alpha, pm.beta, 0.0, 0.0};
        CHECK(energy_per_cycle(shaped, 2 * x) / energy_per_cycle(shaped, x) ==
              doctest::Approx(std::pow(2.0, pm.beta - 1.0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(power_at(pm, 0.0), std::domain_error);
    CHECK_THROWS_AS(energy_per_cycle(pm, -1.0), std::domain_error);
    CHECK_THROWS(PowerModel{0.0, 3.0, 0.0, 0.0}.validate());
    CHECK_THROWS(PowerModel{1.0, 1.0, 0.0, 0.0}.validate());
}

TEST_CASE("frequency set") {
    const FrequencySet fs = default_frequencies();
    REQUIRE(fs.size() == 5);
    CHECK(fs.min() == doctest::Approx(1.01e9));
    CHECK(fs.max() == doctest::Approx(2.1e9));
    CHECK_THROWS(FrequencySet(std::vector<double>{}));
    CHECK_THROWS(FrequencySet(std::vector<double>{2e9, 1e9}));
    CHECK_THROWS(FrequencySet(std::vector<double>{1e9, 1e9}));
    CHECK_THROWS(FrequencySet(std::vector<double>{-1e9}));

    // delta / f falls with f, so the curve dips before it rises.
    const PowerModel pm = default_power_model();
    CHECK(fs[cheapest_frequency(pm, fs)] == doctest::Approx(1.53e9));
    CHECK_FALSE(energy_per_cycle_monotone(pm, fs));
    CHECK(energy_per_cycle_monotone(PowerModel{pm.alpha, pm.beta, pm.gamma, 0.0}, fs));
    CHECK(idle_static_energy(pm, fs, 2.0) == doctest::Approx(2.0 * (pm.gamma * fs.min() + pm.delta)));
}

TEST_CASE("power fit") {
    std::vector<PowerSample> pts;
    for (std::size_t i = 0; i < kFreqsGhz.size(); ++i) pts.push_back({kFreqsGhz[i] * kGHz, kDynamicMw[i] * kmW});
    const PowerFit fit = fit_power_model(pts, 276 * kmW);
    const auto s = fit.model.to_ghz_mw();
    CHECK(std::abs(s.alpha / 23.8729 - 1.0) < 0.02);
    CHECK(std::abs(s.beta / 3.2941 - 1.0) < 0.02);
    CHECK(std::abs(s.gamma / 401.6654 - 1.0) < 0.02);
    CHECK(s.delta == doctest::Approx(276.0));

    // Exact samples give an exact fit.
    const PowerModel truth = PowerModel::from_ghz_mw(30.0, 2.7, 250.0, 100.0);
    std::vector<PowerSample> exact;
    for (double f : {0.8, 1.1, 1.5, 1.9, 2.4, 3.0}) exact.push_back({f * kGHz, dynamic_power_at(truth, f * kGHz)});
    const PowerFit ef = fit_power_model(exact, truth.delta);
    CHECK(ef.model.alpha == doctest::Approx(truth.alpha).epsilon(1e-6));
    CHECK(ef.model.beta == doctest::Approx(truth.beta).epsilon(1e-6));
    CHECK(ef.model.gamma == doctest::Approx(truth.gamma).epsilon(1e-6));
    CHECK(ef.rms_residual < 1e-9);

    const std::vector<PowerSample> two{{1e9, 0.4}, {2e9, 1.1}};
    CHECK_THROWS_AS(fit_power_model(two, 0.0), std::invalid_argument);
    const std::vector<PowerSample> dup{{1e9, 0.4}, {1e9, 0.41}, {2e9, 1.1}};
    CHECK_THROWS_AS(fit_power_model(dup, 0.0), std::invalid_argument);
}
