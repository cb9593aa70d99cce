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

#include "impsched/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace impsched {

namespace {
constexpr double kGHz = 1e9;
constexpr double kmW = 1e-3;
}  // namespace

PowerModel PowerModel::from_ghz_mw(double alpha, double beta, double gamma, double delta_mw) {
    PowerModel pm;
    pm.alpha = alpha * kmW / std::pow(kGHz, beta);
    pm.beta = beta;
    pm.gamma = gamma * kmW / kGHz;
    pm.delta = delta_mw * kmW;
    return pm;
}

PowerModel::Scaled PowerModel::to_ghz_mw() const {
    return {alpha * std::pow(kGHz, beta) / kmW, beta, gamma * kGHz / kmW, delta / kmW};
}

void PowerModel::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("power model: alpha must be positive");
    if (!(beta > 1.0)) throw std::invalid_argument("power model: beta must exceed 1");
    if (!(gamma >= 0.0)) throw std::invalid_argument("power model: gamma must be non-negative");
    if (!(delta >= 0.0)) throw std::invalid_argument("power model: delta must be non-negative");
}

FrequencySet::FrequencySet(std::vector<double> hz) : freqs_(std::move(hz)) {
    if (freqs_.empty()) throw std::invalid_argument("frequency set is empty");
    for (std::size_t i = 0; i < freqs_.size(); ++i) {
        if (!(freqs_[i] > 0.0) || !std::isfinite(freqs_[i])) {
            throw std::invalid_argument("frequencies must be positive");
        }
        if (i > 0 && !(freqs_[i] > freqs_[i - 1])) {
            throw std::invalid_argument("frequencies must be strictly ascending");
        }
    }
}

FrequencySet FrequencySet::from_ghz(std::span<const double> ghz) {
    std::vector<double> hz;
    hz.reserve(ghz.size());
    for (double g : ghz) hz.push_back(g * kGHz);
    return FrequencySet(std::move(hz));
}

PowerModel default_power_model() { return PowerModel::from_ghz_mw(23.8729, 3.2941, 401.6654, 276.0); }

FrequencySet default_frequencies() {
    constexpr std::array<double, 5> ghz{1.01, 1.26, 1.53, 1.81, 2.1};
    return FrequencySet::from_ghz(ghz);
}

namespace {
void require_positive(double f) {
    if (!(f > 0.0)) throw std::domain_error("frequency must be positive");
}
}  // namespace

double dynamic_power_at(const PowerModel &m, double f) {
    require_positive(f);
    return m.alpha * std::pow(f, m.beta) + m.gamma * f;
}

double power_at(const PowerModel &m, double f) {
    require_positive(f);
    return m.alpha * std::pow(f, m.beta) + m.gamma * f + m.delta;
}

double energy_per_cycle(const PowerModel &m, double f) {
    require_positive(f);
    return m.alpha * std::pow(f, m.beta - 1.0) + m.gamma + m.delta / f;
}

double idle_static_energy(const PowerModel &m, const FrequencySet &fs, double idle_seconds) {
    return (m.gamma * fs.min() + m.delta) * std::max(0.0, idle_seconds);
}

bool energy_per_cycle_monotone(const PowerModel &m, const FrequencySet &fs) {
    for (std::size_t i = 1; i < fs.size(); ++i) {
        if (energy_per_cycle(m, fs[i]) < energy_per_cycle(m, fs[i - 1])) return false;
    }
    return true;
}

std::size_t cheapest_frequency(const PowerModel &m, const FrequencySet &fs) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < fs.size(); ++i) {
        if (energy_per_cycle(m, fs[i]) < energy_per_cycle(m, fs[best])) best = i;
    }
    return best;
}

namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

// Gaussian elimination with partial pivoting; false when singular.
bool solve3(Mat3 a, Vec3 b, Vec3 &x) {
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (std::abs(a[piv][c]) < 1e-300) return false;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < 3; ++r) {
            const double k = a[r][c] / a[c][c];
            for (int j = c; j < 3; ++j) a[r][j] -= k * a[c][j];
            b[r] -= k * b[c];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int j = r + 1; j < 3; ++j) s -= a[r][j] * x[j];
        x[r] = s / a[r][r];
    }
    return true;
}

struct Sample {
    double f, y;  // GHz, mW
};

double sse(const std::vector<Sample> &s, const Vec3 &p) {
    double acc = 0.0;
    for (const auto &q : s) {
        const double r = p[0] * std::pow(q.f, p[1]) + p[2] * q.f - q.y;
        acc += r * r;
    }
    return acc;
}

// Best (alpha, gamma) for a fixed exponent: two-column linear least squares.
void linear_part(const std::vector<Sample> &s, double beta, double &alpha, double &gamma) {
    double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
    for (const auto &q : s) {
        const double a = std::pow(q.f, beta);
        s11 += a * a;
        s12 += a * q.f;
        s22 += q.f * q.f;
        t1 += a * q.y;
        t2 += q.f * q.y;
    }
    const double det = s11 * s22 - s12 * s12;
    if (std::abs(det) < 1e-300) {
        alpha = t1 / s11;
        gamma = 0.0;
        return;
    }
    alpha = (t1 * s22 - t2 * s12) / det;
    gamma = (s11 * t2 - s12 * t1) / det;
}

}  // namespace

PowerFit fit_power_model(std::span<const PowerSample> points, double delta) {
    std::vector<Sample> s;
    for (const auto &p : points) {
        if (!(p.frequency > 0.0) || !(p.dynamic_power > 0.0)) {
            throw std::invalid_argument("fit_power_model: samples need positive frequency and power");
        }
        s.push_back({p.frequency / kGHz, p.dynamic_power / kmW});
    }
    std::sort(s.begin(), s.end(), [](const Sample &a, const Sample &b) { return a.f < b.f; });
    std::size_t distinct = s.empty() ? 0 : 1;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].f != s[i - 1].f) ++distinct;
    }
    if (distinct < 3) throw std::invalid_argument("fit_power_model: need at least three distinct frequencies");

    // log-log slope as the starting exponent
    double mx = 0, my = 0;
    for (const auto &q : s) {
        mx += std::log(q.f);
        my += std::log(q.y);
    }
    mx /= static_cast<double>(s.size());
    my /= static_cast<double>(s.size());
    double sxy = 0, sxx = 0;
    for (const auto &q : s) {
        sxy += (std::log(q.f) - mx) * (std::log(q.y) - my);
        sxx += (std::log(q.f) - mx) * (std::log(q.f) - mx);
    }
    Vec3 p{0.0, std::max(1.0 + 1e-3, sxy / sxx), 0.0};
    linear_part(s, p[1], p[0], p[2]);

    // Damped Gauss-Newton (Levenberg-Marquardt).
    double lambda = 1e-3;
    double cur = sse(s, p);
    int it = 0;
    for (; it < 100; ++it) {
        Mat3 jtj{};
        Vec3 jtr{};
        for (const auto &q : s) {
            const double fb = std::pow(q.f, p[1]);
            const Vec3 j{fb, p[0] * fb * std::log(q.f), q.f};
            const double r = p[0] * fb + p[2] * q.f - q.y;
            for (int a = 0; a < 3; ++a) {
                jtr[a] += j[a] * r;
                for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
            }
        }
        bool accepted = false;
        double rel_step = 0.0;
        for (int tries = 0; tries < 40 && !accepted; ++tries) {
            Mat3 m = jtj;
            for (int a = 0; a < 3; ++a) m[a][a] *= 1.0 + lambda;
            Vec3 step{};
            if (!solve3(m, Vec3{-jtr[0], -jtr[1], -jtr[2]}, step)) {
                lambda *= 10.0;
                continue;
            }
            Vec3 next{p[0] + step[0], p[1] + step[1], p[2] + step[2]};
            const double val = sse(s, next);
            if (val <= cur) {
                rel_step = 0.0;
                for (int a = 0; a < 3; ++a) rel_step = std::max(rel_step, std::abs(step[a]) / std::max(std::abs(p[a]), 1e-12));
                p = next;
                cur = val;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted || rel_step < 1e-10) {
            ++it;
            break;
        }
    }

    PowerFit fit;
    fit.model = PowerModel::from_ghz_mw(p[0], p[1], p[2], delta / kmW);
    fit.rms_residual = std::sqrt(cur / static_cast<double>(s.size())) * kmW;
    fit.iterations = it;
    return fit;
}

}  // namespace impsched
