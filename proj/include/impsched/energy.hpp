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

#include <cstddef>
#include <span>
#include <vector>

namespace impsched {

/**
 * Processor power rho(f) = alpha * f^beta + gamma * f + delta, in SI units
 * (f in Hz, rho in W). alpha * f^beta is the dynamic part.
 */
struct PowerModel {
    double alpha = 0.0;
    double beta = 3.0;
    double gamma = 0.0;
    double delta = 0.0;

    /// Constants given for f in GHz and power in mW.
    static PowerModel from_ghz_mw(double alpha, double beta, double gamma, double delta_mw);
    /// (alpha, beta, gamma, delta) rescaled to GHz / mW.
    struct Scaled {
        double alpha, beta, gamma, delta;
    };
    Scaled to_ghz_mw() const;

    void validate() const;
    bool operator==(const PowerModel &) const = default;
};

/// Strictly ascending positive frequencies in Hz.
class FrequencySet {
  public:
    FrequencySet() = default;
    explicit FrequencySet(std::vector<double> hz);

    static FrequencySet from_ghz(std::span<const double> ghz);

    std::size_t size() const { return freqs_.size(); }
    double operator[](std::size_t i) const { return freqs_[i]; }
    double min() const { return freqs_.front(); }
    double max() const { return freqs_.back(); }
    std::span<const double> values() const { return freqs_; }

    bool operator==(const FrequencySet &) const = default;

  private:
    std::vector<double> freqs_;
};

/// 70nm five-level processor: delta = 276 mW, fitted alpha/beta/gamma.
PowerModel default_power_model();
FrequencySet default_frequencies();

double power_at(const PowerModel &model, double f);
double dynamic_power_at(const PowerModel &model, double f);
/// Energy of one cycle at f: alpha f^(beta-1) + gamma + delta / f (J).
double energy_per_cycle(const PowerModel &model, double f);

/// Energy of the non-switching terms (gamma f + delta) while a processor idles
/// at the lowest frequency for `idle_seconds`. Reported only; budgets never
/// include it.
double idle_static_energy(const PowerModel &model, const FrequencySet &fs, double idle_seconds);

/// True when energy_per_cycle is non-decreasing across the set.
bool energy_per_cycle_monotone(const PowerModel &model, const FrequencySet &fs);

/// Index of the frequency with the lowest energy per cycle.
std::size_t cheapest_frequency(const PowerModel &model, const FrequencySet &fs);

struct PowerSample {
    double frequency;      // Hz
    double dynamic_power;  // W, the alpha f^beta + gamma f part
};

struct PowerFit {
    PowerModel model;
    double rms_residual = 0.0;  // W
    int iterations = 0;
};

/**
 * Least-squares fit of alpha, beta, gamma to dynamic power samples;
 * delta is passed through. Gauss-Newton from a log-log slope estimate of
 * beta. Throws std::invalid_argument for fewer than three distinct
 * frequencies.
 */
PowerFit fit_power_model(std::span<const PowerSample> points, double delta);

}  // namespace impsched
