// SPDX-License-Identifier: Apache-2.0
//
// kwwint: closed-form interference densities for Poisson networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Monte-Carlo reference for the interference model: Poisson fields of
// transmitters in a square window around a receiver at the origin, with a
// serving transmitter at a fixed distance that is not part of the field.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "kwwint/error.hpp"
#include "kwwint/interference.hpp"

namespace kwwint::mc {

struct SimConfig {
    /// Side length of the square window (km), centred on the receiver.
    double window_km = 40.0;
    int trials = 2000;
    std::uint64_t seed = 1;
    NetworkParams net{2.0, 3};
    FadingModel interference_fading = FadingModel::rayleigh(1.0);
    FadingModel signal_fading = FadingModel::rayleigh(1.0);
    double serving_distance_km = 0.25;
    /// Noise power sigma^2.
    double noise = 0.0;
    /// Interferers closer than this are moved out to it (km).
    double guard_km = 1e-3;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 1;

    void validate() const {
        if (!(window_km > 0.0) || !std::isfinite(window_km)) {
            throw DomainError("SimConfig: window_km must be a finite value > 0");
        }
        if (trials < 1) {
            throw DomainError("SimConfig: trials must be >= 1");
        }
        if (!(serving_distance_km > 0.0) || !(serving_distance_km < window_km / 2.0)) {
            throw DomainError("SimConfig: serving distance must lie inside the window");
        }
        if (!(noise >= 0.0) || !std::isfinite(noise)) {
            throw DomainError("SimConfig: noise must be a finite value >= 0");
        }
        if (!(guard_km > 0.0) || !(guard_km < serving_distance_km)) {
            throw DomainError("SimConfig: guard radius must lie in (0, serving distance)");
        }
    }

    double area() const { return window_km * window_km; }
};

struct TrialRecord {
    double interference = 0.0;
    double signal = 0.0;
    /// signal / (interference + noise); +inf for an empty field without noise.
    double sinr = 0.0;
    std::uint64_t interferers = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the independent generator for one trial.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
}

/// One realization of the field and the serving link.
template <typename Rng>
TrialRecord sample_field(const SimConfig& cfg, Rng& rng) {
    const double half = cfg.window_km / 2.0;
    const double guard2 = cfg.guard_km * cfg.guard_km;
    const double exponent = -cfg.net.eta / 2.0;
    std::poisson_distribution<std::uint64_t> count(cfg.net.lambda * cfg.area());
    std::uniform_real_distribution<double> coord(-half, half);

    TrialRecord rec;
    rec.interferers = count(rng);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < rec.interferers; ++i) {
        const double x = coord(rng);
        const double y = coord(rng);
        const double r2 = std::max(x * x + y * y, guard2);
        sum += cfg.interference_fading.sample(rng) * std::pow(r2, exponent);
    }
    rec.interference = sum;
    rec.signal = cfg.signal_fading.sample(rng) * std::pow(cfg.serving_distance_km, -cfg.net.eta);
    const double denom = rec.interference + cfg.noise;
    rec.sinr = denom > 0.0 ? rec.signal / denom : std::numeric_limits<double>::infinity();
    return rec;
}

/// Run all trials. Trial k always uses the generator seeded by
/// trial_seed(cfg.seed, k), so the output does not depend on `threads`.
inline std::vector<TrialRecord> simulate(const SimConfig& cfg) {
    cfg.validate();
    std::vector<TrialRecord> out(static_cast<std::size_t>(cfg.trials));
    auto run = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t k = begin; k < out.size(); k += stride) {
            std::mt19937_64 rng(trial_seed(cfg.seed, k));
            out[k] = sample_field(cfg, rng);
        }
    };
    unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(out.size()));
    if (workers <= 1) {
        run(0, 1);
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(run, w, workers);
    }
    return out;
}

enum class Field { Interference, Sinr };

inline double field_value(const TrialRecord& r, Field f) {
    return f == Field::Interference ? r.interference : r.sinr;
}

/// Right-continuous empirical distribution function.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
        if (sorted_.empty()) {
            throw DomainError("EmpiricalCdf: no samples");
        }
        std::sort(sorted_.begin(), sorted_.end());
    }

    EmpiricalCdf(const std::vector<TrialRecord>& records, Field field)
        : EmpiricalCdf(extract(records, field)) {}

    double operator()(double x) const {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    const std::vector<double>& samples() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

    /// sup_x |F_n(x) - F(x)| for a continuous reference F.
    double ks_statistic(const std::function<double(double)>& reference) const {
        const double n = static_cast<double>(sorted_.size());
        double d = 0.0;
        for (std::size_t i = 0; i < sorted_.size(); ++i) {
            const double x = sorted_[i];
            const double f = x > 0.0 ? reference(x) : 0.0;
            d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
        }
        return d;
    }

private:
    static std::vector<double> extract(const std::vector<TrialRecord>& records, Field field) {
        std::vector<double> v;
        v.reserve(records.size());
        for (const TrialRecord& r : records) {
            v.push_back(field_value(r, field));
        }
        return v;
    }

    std::vector<double> sorted_;
};

inline EmpiricalCdf empirical_cdf(const std::vector<TrialRecord>& records, Field field) {
    return EmpiricalCdf(records, field);
}

/// Fraction of trials with SINR above each threshold.
inline std::vector<double> empirical_coverage(const std::vector<TrialRecord>& records,
                                              const std::vector<double>& thresholds) {
    if (thresholds.empty()) {
        throw DomainError("empirical_coverage: empty threshold grid");
    }
    if (records.empty()) {
        throw DomainError("empirical_coverage: no records");
    }
    std::vector<double> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) {
        std::size_t hits = 0;
        for (const TrialRecord& r : records) {
            hits += r.sinr > t ? 1 : 0;
        }
        out.push_back(static_cast<double>(hits) / static_cast<double>(records.size()));
    }
    return out;
}

struct LtEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Sample mean of exp(-s I) with its standard error.
inline LtEstimate empirical_laplace_transform(const std::vector<TrialRecord>& records, double s) {
    if (records.size() < 2) {
        throw DomainError("empirical_laplace_transform: need at least two records");
    }
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (const TrialRecord& r : records) {
        const double v = std::exp(-s * r.interference);
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    const double var = m2 / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

/// Mean interference from transmitters beyond the disc inscribed in the
/// window, 2 pi lambda E[g] R^{2-eta} / (eta - 2) with R = window/2. An upper
/// bound on the mean of what the square window leaves out.
inline double truncation_tail_mean(const SimConfig& cfg) {
    const double r = cfg.window_km / 2.0;
    const int eta = cfg.net.eta;
    return 2.0 * std::numbers::pi * cfg.net.lambda * cfg.interference_fading.mean_power() * std::pow(r, 2.0 - eta) /
           (eta - 2.0);
}

} // namespace kwwint::mc
