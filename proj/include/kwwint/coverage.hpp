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

// Coverage probability P[S / (I + sigma^2) > T] with S = h r^{-eta}:
// p_c(T) = E_h[ F_I(h r^{-eta} / T - sigma^2) ].

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "kwwint/error.hpp"
#include "kwwint/interference.hpp"
#include "kwwint/ppp_mc.hpp"
#include "kwwint/quadrature.hpp"
#include "kwwint/specfun.hpp"
#include "kwwint/stable_pdf.hpp"

namespace kwwint {

/// The analytic scenario and the simulation disagree on a shared parameter.
class ParameterMismatch : public std::invalid_argument {
public:
    explicit ParameterMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct CoverageScenario {
    NetworkParams net{2.0, 3};
    FadingModel signal_fading = FadingModel::rayleigh(1.0);
    FadingModel interference_fading = FadingModel::rayleigh(1.0);
    double r_km = 0.25;
    /// Noise power sigma^2.
    double noise = 0.0;
    /// SINR thresholds, linear scale, strictly increasing.
    std::vector<double> thresholds;

    void validate() const {
        if (!(r_km > 0.0) || !std::isfinite(r_km)) {
            throw DomainError("CoverageScenario: r_km must be a finite value > 0");
        }
        if (!(noise >= 0.0) || !std::isfinite(noise)) {
            throw DomainError("CoverageScenario: noise must be a finite value >= 0");
        }
        if (thresholds.empty()) {
            throw DomainError("CoverageScenario: empty threshold grid");
        }
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            if (!(thresholds[i] > 0.0) || !std::isfinite(thresholds[i])) {
                throw DomainError("CoverageScenario: thresholds must be finite and > 0");
            }
            if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
                throw DomainError("CoverageScenario: thresholds must be strictly increasing");
            }
        }
    }

    /// Mean received signal power h r^{-eta} scale factor r^{-eta}.
    double path_gain() const { return std::pow(r_km, -net.eta); }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

struct CoverageOptions {
    /// Signal-fading mass ignored beyond the truncation point.
    double tail_eps = 1e-8;
    /// Absolute tolerance of the outer integral over h.
    double abs_tol = 1e-10;
    talbot::TalbotConfig talbot{};
};

namespace detail {

// E_h[F(h g / T - sigma^2)] for one threshold, in the variable w = ln h.
template <typename Cdf>
double coverage_point(const CoverageScenario& sc, const Cdf& cdf, double threshold, const CoverageOptions& opt) {
    const FadingModel& f = sc.signal_fading;
    const double gain = sc.path_gain();
    const double h_hi = f.tail_quantile_bound(opt.tail_eps);
    const double h_min = threshold * sc.noise / gain;
    const double h_lo = std::max(h_min, 1e-30 * f.mean_power());
    if (!(h_hi > h_lo)) {
        return 0.0;
    }
    auto integrand = [&](double w) {
        const double h = std::exp(w);
        const double arg = h * gain / threshold - sc.noise;
        if (!(arg > 0.0)) {
            return 0.0;
        }
        return h * f.pdf(h) * cdf(arg);
    };
    quad::QuadOptions q;
    q.abs_tol = opt.abs_tol;
    q.max_intervals = 4000;
    q.initial_panels = 32;
    const double body = quad::integrate(integrand, std::log(h_lo), std::log(h_hi), q).value;
    // beyond h_hi the cdf is at most 1 and the mass at most tail_eps; use the
    // cdf at h_hi as the estimate of the missing piece
    const double tail = opt.tail_eps * cdf(h_hi * gain / threshold - sc.noise);
    return std::clamp(body + tail, 0.0, 1.0);
}

} // namespace detail

/// Coverage probability at each threshold, integrating the interference CDF
/// against the signal-fading density.
inline std::vector<double> coverage_analytic(const CoverageScenario& sc, const CoverageOptions& opt = {}) {
    sc.validate();
    const KwwScale scale = kww_scale(sc.net, sc.interference_fading);
    const stable::StablePdf dist = stable::StablePdf::best_available(scale, opt.talbot);
    const stable::TabulatedCdf cdf(dist);
    std::vector<double> out;
    out.reserve(sc.thresholds.size());
    for (double t : sc.thresholds) {
        out.push_back(detail::coverage_point(sc, cdf, t, opt));
    }
    return out;
}

/// Coverage under Rayleigh signal fading straight from the Laplace transform:
/// p_c = exp(-mu T r^eta sigma^2) L_I(mu T r^eta).
inline std::vector<double> coverage_rayleigh_lt(const CoverageScenario& sc) {
    sc.validate();
    const auto* ray = std::get_if<Rayleigh>(&sc.signal_fading.variant());
    if (ray == nullptr) {
        throw DomainError("coverage_rayleigh_lt: signal fading must be Rayleigh");
    }
    const KwwScale scale = kww_scale(sc.net, sc.interference_fading);
    std::vector<double> out;
    out.reserve(sc.thresholds.size());
    for (double t : sc.thresholds) {
        const double s = ray->mu * t / sc.path_gain();
        out.push_back(std::exp(-s * sc.noise) * laplace_transform(scale, s));
    }
    return out;
}

/// The eta = 3, Nakagami-interference CDF written with two 2F2 functions.
/// `value` is clamped to [0, 1]; `reliable` is false when cancellation in the
/// series leaves an error above 1e-10.
struct XiEval {
    double value = 0.0;
    bool reliable = true;
};

inline XiEval xi_eta3(double u, double lambda, double m, double pr) {
    if (!(u > 0.0)) {
        return {0.0, true};
    }
    using specfun::gamma;
    const double pi = std::numbers::pi;
    const double g13 = gamma(1.0 / 3.0);
    const double g23 = gamma(2.0 / 3.0);
    const double gm = gamma(m);
    const double gm23 = gamma(m + 2.0 / 3.0);
    const double ratio = gm23 / gm;
    const double z = -4.0 * std::pow(lambda, 3) * pr * pr * std::pow(pi, 3) * std::pow(g13, 3) * std::pow(ratio, 3) /
                     (27.0 * m * m * u * u);
    const double q = pr / (m * u);
    const specfun::SeriesResult f1 =
        specfun::phyp_series(specfun::HypergeometricSpec({1.0 / 3.0, 5.0 / 6.0}, {2.0 / 3.0, 4.0 / 3.0}), z);
    const specfun::SeriesResult f2 =
        specfun::phyp_series(specfun::HypergeometricSpec({2.0 / 3.0, 7.0 / 6.0}, {4.0 / 3.0, 5.0 / 3.0}), z);
    const double c1 = -6.0 * std::sqrt(3.0) * pi * lambda * g23 * g23 * ratio * std::pow(q, 2.0 / 3.0);
    const double c2 = -2.0 * std::pow(pi, 3) * lambda * lambda * g13 * ratio * ratio * std::pow(q, 4.0 / 3.0);
    const double xi1 = c1 * f1.value;
    const double xi2 = c2 * f2.value;
    const double constant = 3.0 * std::sqrt(3.0) * g23 * g23 + 6.0 * std::pow(2.0, 2.0 / 3.0) * std::pow(pi, 1.5) /
                                                                    gamma(1.0 / 6.0);
    const double pref = g13 / (12.0 * pi * g23);
    const double value = pref * (xi1 + xi2 + constant);
    const double err = pref * (std::abs(c1) * f1.error_estimate + std::abs(c2) * f2.error_estimate) +
                       4e-15 * pref * (std::abs(xi1) + std::abs(xi2) + constant);
    const bool ok = f1.converged && f2.converged && std::isfinite(value) && err <= 1e-10;
    return {std::clamp(value, 0.0, 1.0), ok};
}

struct XiCoverage {
    std::vector<double> coverage;
    /// Evaluations of xi that were replaced by the tabulated CDF.
    std::size_t fallbacks = 0;
    std::size_t evaluations = 0;
};

/// Coverage for eta = 3 with Nakagami interference, using the 2F2 form of
/// the interference CDF. Points where that form loses precision fall back to
/// the tabulated CDF and are counted.
inline XiCoverage coverage_xi_eta3(const CoverageScenario& sc, const CoverageOptions& opt = {}) {
    sc.validate();
    if (sc.net.eta != 3) {
        throw DomainError("coverage_xi_eta3: requires eta = 3");
    }
    const auto* nak = std::get_if<Nakagami>(&sc.interference_fading.variant());
    if (nak == nullptr) {
        throw DomainError("coverage_xi_eta3: requires Nakagami interference fading");
    }
    const KwwScale scale = kww_scale(sc.net, sc.interference_fading);
    const stable::TabulatedCdf table(stable::StablePdf(scale, stable::Backend::ClosedForm, opt.talbot));
    XiCoverage out;
    auto cdf = [&](double u) {
        ++out.evaluations;
        const XiEval e = xi_eta3(u, sc.net.lambda, nak->m, nak->pr);
        if (e.reliable) {
            return e.value;
        }
        ++out.fallbacks;
        return table(u);
    };
    for (double t : sc.thresholds) {
        out.coverage.push_back(detail::coverage_point(sc, cdf, t, opt));
    }
    return out;
}

struct CoverageRow {
    double threshold = 0.0;
    double analytic = 0.0;
    double empirical = 0.0;
    double abs_diff = 0.0;
    bool exceeds_budget = false;
};

inline void check_consistent(const CoverageScenario& sc, const mc::SimConfig& sim) {
    if (!(sc.net == sim.net)) {
        throw ParameterMismatch("coverage_mc_compare: network parameters differ");
    }
    if (!(sc.signal_fading == sim.signal_fading)) {
        throw ParameterMismatch("coverage_mc_compare: signal fading differs");
    }
    if (!(sc.interference_fading == sim.interference_fading)) {
        throw ParameterMismatch("coverage_mc_compare: interference fading differs");
    }
    if (sc.r_km != sim.serving_distance_km) {
        throw ParameterMismatch("coverage_mc_compare: serving distance differs");
    }
    if (sc.noise != sim.noise) {
        throw ParameterMismatch("coverage_mc_compare: noise power differs");
    }
}

/// Analytic coverage next to the empirical coverage of `records` (simulated
/// with `sim`), flagging thresholds whose difference exceeds `budget`.
inline std::vector<CoverageRow> coverage_mc_compare(const CoverageScenario& sc, const mc::SimConfig& sim,
                                                    const std::vector<mc::TrialRecord>& records,
                                                    double budget = 0.03, const CoverageOptions& opt = {}) {
    check_consistent(sc, sim);
    const std::vector<double> analytic = coverage_analytic(sc, opt);
    const std::vector<double> empirical = mc::empirical_coverage(records, sc.thresholds);
    std::vector<CoverageRow> rows;
    rows.reserve(analytic.size());
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double d = std::abs(analytic[i] - empirical[i]);
        rows.push_back({sc.thresholds[i], analytic[i], empirical[i], d, d > budget});
    }
    return rows;
}

/// As above, running the simulation first.
inline std::vector<CoverageRow> coverage_mc_compare(const CoverageScenario& sc, const mc::SimConfig& sim,
                                                    double budget = 0.03, const CoverageOptions& opt = {}) {
    check_consistent(sc, sim);
    return coverage_mc_compare(sc, sim, mc::simulate(sim), budget, opt);
}

} // namespace kwwint
