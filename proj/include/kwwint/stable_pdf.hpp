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

// Densities of the one-sided stable laws whose Laplace transform is the
// stretched exponential exp(-t s^beta).
//
// All evaluation happens on the unit scale: with u = t^{1/beta},
//     pdf(I) = f_beta(I / u) / u,
// where f_beta inverts exp(-s^beta). Seven values of beta have closed forms
// built from Bessel and generalized hypergeometric functions; any other
// beta in (0, 1) is served by Talbot inversion or, when beta factors into
// two supported values, by the composition integral
//     f_{ab}(x) = int_0^inf u^{-1/a} f_a(x u^{-1/a}) f_b(u) du.
//
// A closed-form evaluation carries an estimate of its rounding error. Where
// cancellation between the hypergeometric terms makes that estimate too
// large (deep in the left tail), the point is recomputed by Talbot inversion
// and the result is marked as a fallback.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kwwint/error.hpp"
#include "kwwint/kww_scale.hpp"
#include "kwwint/quadrature.hpp"
#include "kwwint/specfun.hpp"
#include "kwwint/talbot.hpp"

namespace kwwint::stable {

/// beta values with a closed-form density.
inline const std::array<Rational, 7>& closed_form_betas() {
    static const std::array<Rational, 7> table = {
        Rational{1, 2}, Rational{1, 3}, Rational{2, 3}, Rational{1, 4},
        Rational{1, 5}, Rational{2, 5}, Rational{1, 6}};
    return table;
}

inline bool has_closed_form(const Rational& beta) {
    const auto& t = closed_form_betas();
    return std::find(t.begin(), t.end(), beta) != t.end();
}

struct BetaInfo {
    Rational beta;
    bool closed_form = false;
};

/// beta = 2 / eta for a path-loss exponent eta >= 3.
inline BetaInfo eta_to_beta(int eta) {
    if (eta == 2) {
        throw PoleError("eta = 2: Gamma(1 - 2/eta) has a pole and the interference diverges; eta must be >= 3");
    }
    if (eta < 3) {
        throw DomainError("eta must be an integer >= 3 (interference diverges for eta <= 2)");
    }
    const Rational beta(2, eta);
    return {beta, has_closed_form(beta)};
}

/// Value of a unit-scale density together with an absolute error estimate.
struct DensityEval {
    double value = 0.0;
    double error_estimate = 0.0;
};

namespace rows {

using specfun::HypergeometricSpec;
using specfun::SeriesResult;

inline constexpr double coef_rel_error = 4e-15;
inline constexpr double unreliable = std::numeric_limits<double>::infinity();

// Accumulates coefficient * x^power * pFq terms and their error estimates.
struct TermSum {
    double value = 0.0;
    double error = 0.0;

    void add(double scale, const SeriesResult& s) {
        const double term = scale * s.value;
        value += term;
        error += std::abs(scale) * s.error_estimate + coef_rel_error * std::abs(term);
        if (!s.converged) {
            error = unreliable;
        }
    }
};

inline SeriesResult series_or_flag(const HypergeometricSpec& spec, double z) {
    if (std::abs(z) > specfun::phyp_reliable_bound) {
        SeriesResult r;
        r.converged = false;
        r.error_estimate = unreliable;
        return r;
    }
    return specfun::phyp_series(spec, z);
}

inline DensityEval beta_1_2(double x) {
    const double v = std::exp(-1.0 / (4.0 * x)) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 1.5));
    return {v, 1e-15 * v};
}

inline DensityEval beta_1_3(double x) {
    const double z = 2.0 / (3.0 * std::sqrt(3.0 * x));
    const specfun::BesselOrder third(1.0 / 3.0);
    const double k = specfun::bessel_k_scaled(third, z) * std::exp(-z);
    const double v = std::pow(x, -1.5) / (3.0 * std::numbers::pi) * k;
    return {v, 1e-13 * v};
}

/// 1F1 form (primary): both Kummer functions at -4/(27 x^2).
inline DensityEval beta_2_3(double x) {
    const double z = -4.0 / (27.0 * x * x);
    const double g23 = specfun::gamma(2.0 / 3.0);
    TermSum sum;
    sum.add(g23 / (std::sqrt(3.0) * std::numbers::pi) * std::pow(x, -5.0 / 3.0),
            specfun::kummer_1f1_series(5.0 / 6.0, 2.0 / 3.0, z));
    sum.add(2.0 / 9.0 / g23 * std::pow(x, -7.0 / 3.0),
            specfun::kummer_1f1_series(7.0 / 6.0, 4.0 / 3.0, z));
    return {sum.value, sum.error};
}

/// Bessel form of the beta = 2/3 density; equal to beta_2_3.
inline DensityEval beta_2_3_bessel(double x) {
    const double z = 2.0 / (27.0 * x * x);
    const double k13 = specfun::bessel_k_scaled(specfun::BesselOrder(1.0 / 3.0), z);
    const double k23 = specfun::bessel_k_scaled(specfun::BesselOrder(2.0 / 3.0), z);
    // exp(-z) (K_1/3(z) + K_2/3(z)) = exp(-2z) (scaled K sum)
    const double v = 2.0 * std::sqrt(3.0) / (27.0 * std::numbers::pi * x * x * x) *
                     std::exp(-2.0 * z) * (k13 + k23);
    return {v, 1e-13 * v};
}

inline DensityEval beta_1_4(double x) {
    const double z = -1.0 / (256.0 * x);
    const double pref = 1.0 / (64.0 * std::numbers::pi * std::pow(x, 1.75));
    TermSum sum;
    sum.add(pref * 8.0 * std::sqrt(2.0 * x) * specfun::gamma(0.25),
            series_or_flag(HypergeometricSpec({}, {0.5, 0.75}), z));
    sum.add(-pref * std::sqrt(2.0) * specfun::gamma(-0.25),
            series_or_flag(HypergeometricSpec({}, {1.25, 1.5}), z));
    sum.add(-pref * 16.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25),
            series_or_flag(HypergeometricSpec({}, {0.75, 1.25}), z));
    return {sum.value, sum.error};
}

/// b_m(5,1), m = 1..4.
inline std::array<double, 4> b_5_1() {
    using specfun::gamma;
    const double pi = std::numbers::pi;
    const double s5 = std::sqrt(5.0);
    return {s5 * gamma(0.2) / (20.0 * pi * std::sin(2.0 * pi / 5.0)),
            -s5 * gamma(0.4) / (20.0 * pi * std::sin(pi / 5.0)),
            s5 * gamma(0.6) / (40.0 * pi * std::sin(pi / 5.0)),
            -s5 * gamma(0.8) / (120.0 * pi * std::sin(2.0 * pi / 5.0))};
}

/// b_m(5,2), m = 1..4.
inline std::array<double, 4> b_5_2() {
    using specfun::gamma;
    const double pi = std::numbers::pi;
    const double s5 = std::sqrt(5.0);
    const double spi = std::sqrt(pi);
    return {std::pow(2.0, 0.4) * s5 * gamma(0.2) / (10.0 * spi * gamma(0.3) * std::sin(2.0 * pi / 5.0)),
            -std::pow(2.0, 0.8) * s5 * gamma(0.4) / (10.0 * spi * gamma(0.1) * std::sin(pi / 5.0)),
            -std::pow(2.0, 0.2) * s5 * gamma(0.6) / (100.0 * spi * gamma(0.9) * std::sin(pi / 5.0)),
            std::pow(2.0, 0.6) * s5 * gamma(0.8) / (100.0 * spi * gamma(0.7) * std::sin(2.0 * pi / 5.0))};
}

inline DensityEval beta_1_5(double x) {
    static const std::array<double, 4> b = b_5_1();
    const double z = 1.0 / (3125.0 * x);
    TermSum sum;
    for (int m = 1; m <= 4; ++m) {
        std::vector<double> upper = {1.0};
        const auto blk = specfun::delta_block(1, 1.0 + m / 5.0);
        upper.insert(upper.end(), blk.begin(), blk.end());
        const HypergeometricSpec spec(std::move(upper), specfun::delta_block(5, 1.0 + m));
        sum.add(b[m - 1] * std::pow(x, -1.0 - m / 5.0), series_or_flag(spec, z));
    }
    return {sum.value, sum.error};
}

inline DensityEval beta_2_5(double x) {
    static const std::array<double, 4> b = b_5_2();
    // negative argument: regrouping the stable series by k mod 5 flips the
    // sign (-1)^{k+1} while sin(2 pi k / 5) repeats
    const double z = -4.0 / (3125.0 * x * x);
    TermSum sum;
    for (int m = 1; m <= 4; ++m) {
        std::vector<double> upper = {1.0};
        const auto blk = specfun::delta_block(2, 1.0 + 2.0 * m / 5.0);
        upper.insert(upper.end(), blk.begin(), blk.end());
        const HypergeometricSpec spec(std::move(upper), specfun::delta_block(5, 1.0 + m));
        sum.add(b[m - 1] * std::pow(x, -1.0 - 2.0 * m / 5.0), series_or_flag(spec, z));
    }
    return {sum.value, sum.error};
}

inline DensityEval beta_1_6(double x) {
    using specfun::gamma;
    const double pi = std::numbers::pi;
    const double z = -1.0 / (46656.0 * x);
    const double g23 = gamma(2.0 / 3.0);
    TermSum sum;
    sum.add(std::pow(2.0, -1.0 / 3.0) * std::pow(3.0, -1.5) * std::sqrt(pi) / (g23 * g23) *
                std::pow(x, -7.0 / 6.0),
            series_or_flag(HypergeometricSpec({}, {1.0 / 3.0, 0.5, 2.0 / 3.0, 5.0 / 6.0}), z));
    sum.add(-1.0 / (6.0 * g23) * std::pow(x, -4.0 / 3.0),
            series_or_flag(HypergeometricSpec({}, {0.5, 2.0 / 3.0, 5.0 / 6.0, 7.0 / 6.0}), z));
    sum.add(1.0 / (12.0 * std::sqrt(pi)) * std::pow(x, -1.5),
            series_or_flag(HypergeometricSpec({}, {2.0 / 3.0, 5.0 / 6.0, 7.0 / 6.0, 4.0 / 3.0}), z));
    sum.add(-std::sqrt(3.0) * g23 / (72.0 * pi) * std::pow(x, -5.0 / 3.0),
            series_or_flag(HypergeometricSpec({}, {5.0 / 6.0, 7.0 / 6.0, 4.0 / 3.0, 1.5}), z));
    sum.add(std::pow(3.0, -1.5) * g23 * g23 / (std::pow(2.0, 17.0 / 3.0) * std::pow(pi, 1.5)) *
                std::pow(x, -11.0 / 6.0),
            series_or_flag(HypergeometricSpec({}, {7.0 / 6.0, 4.0 / 3.0, 1.5, 5.0 / 3.0}), z));
    return {sum.value, sum.error};
}

} // namespace rows

/// Closed-form unit-scale density f_beta(x). Throws BackendError for beta
/// without a closed form.
inline DensityEval closed_form_standard(const Rational& beta, double x) {
    if (!(x > 0.0)) {
        throw DomainError("density argument must be > 0");
    }
    if (beta == Rational{1, 2}) return rows::beta_1_2(x);
    if (beta == Rational{1, 3}) return rows::beta_1_3(x);
    if (beta == Rational{2, 3}) return rows::beta_2_3(x);
    if (beta == Rational{1, 4}) return rows::beta_1_4(x);
    if (beta == Rational{1, 5}) return rows::beta_1_5(x);
    if (beta == Rational{2, 5}) return rows::beta_2_5(x);
    if (beta == Rational{1, 6}) return rows::beta_1_6(x);
    throw BackendError("no closed form for beta = " + beta.str());
}

/// Unit-scale point below which f_beta < ~exp(-80): the left-tail saddle
/// exponent (1-b) b^{b/(1-b)} x^{-b/(1-b)} reaches 80 there.
inline double left_tail_cutoff(const Rational& beta) {
    const double b = beta.value();
    return std::pow((1.0 - b) * std::pow(b, b / (1.0 - b)) / 80.0, (1.0 - b) / b);
}

/// Unit-scale point from which survival_series() is used for the CDF.
inline double survival_switch(const Rational& beta) { return std::pow(2.0, 1.0 / beta.value()); }

/// P[X > x] for the unit-scale law, from the convergent expansion
///     (1/pi) sum_k (-1)^{k+1} Gamma(k b) / k! sin(pi k b) x^{-k b}.
/// Accurate where x^{-b} <= 1.
inline double survival_series(const Rational& beta, double x) {
    using ld = long double;
    const ld b = beta.value();
    const ld y = std::pow(static_cast<ld>(x), -b);
    const ld pi = std::numbers::pi_v<ld>;
    ld sum = 0.0L;
    ld ypow = 1.0L;
    for (int k = 1; k < 400; ++k) {
        ypow *= y;
        const ld kb = k * b;
        const ld s = std::sin(pi * kb);
        const ld mag = std::exp(static_cast<ld>(specfun::log_gamma(static_cast<double>(kb))) -
                                std::lgamma(static_cast<ld>(k) + 1.0L)) * ypow;
        const ld term = ((k % 2 == 1) ? 1.0L : -1.0L) * mag * s;
        sum += term;
        if (mag < 1e-20L * std::abs(sum) && k > 4) {
            break;
        }
    }
    return static_cast<double>(sum / pi);
}

enum class Backend { ClosedForm, Talbot, Composition };

inline std::string to_string(Backend b) {
    switch (b) {
    case Backend::ClosedForm: return "closed-form";
    case Backend::Talbot: return "talbot";
    case Backend::Composition: return "composition";
    }
    return "?";
}

struct PdfEval {
    double value = 0.0;
    /// Backend that produced the value.
    Backend backend = Backend::ClosedForm;
    /// True when the closed form was abandoned for Talbot at this point.
    bool fallback = false;
};

namespace detail {

// Values within this distance of zero are reported as 0.
inline constexpr double zero_resolution = 1e-13;

inline double clamp_resolution(double v, double err) {
    if (v < 0.0 && v >= -std::max(err, zero_resolution)) {
        return 0.0;
    }
    return v;
}

inline double talbot_standard(const Rational& beta, double x, const talbot::TalbotConfig& cfg) {
    return talbot::invert_kww_at(KwwScale(beta, 1.0), x, cfg).value;
}

/// Unit-scale density by the best single-law backend: closed form with
/// per-point Talbot fallback, or Talbot alone for beta without a closed form.
inline PdfEval standard_single(const Rational& beta, double x, Backend backend,
                               const talbot::TalbotConfig& cfg) {
    if (x < left_tail_cutoff(beta)) {
        return {0.0, backend, false};
    }
    if (backend == Backend::ClosedForm) {
        const DensityEval e = closed_form_standard(beta, x);
        const bool reliable = std::isfinite(e.value) && e.error_estimate <= 1e-12 + 1e-9 * std::abs(e.value) &&
                              e.value >= -std::max(e.error_estimate, zero_resolution);
        if (reliable) {
            return {clamp_resolution(e.value, e.error_estimate), Backend::ClosedForm, false};
        }
        return {clamp_resolution(talbot_standard(beta, x, cfg), 0.0), Backend::Talbot, true};
    }
    return {clamp_resolution(talbot_standard(beta, x, cfg), 0.0), Backend::Talbot, false};
}

inline Backend natural_backend(const Rational& beta) {
    return has_closed_form(beta) ? Backend::ClosedForm : Backend::Talbot;
}

/// Composition integral on the unit scale, in the variable w = ln u.
inline double compose_standard(const Rational& beta_a, const Rational& beta_b, double x,
                               const talbot::TalbotConfig& cfg) {
    const double a = beta_a.value();
    const double w_lo = std::log(left_tail_cutoff(beta_b));
    const double w_hi = a * std::log(x / left_tail_cutoff(beta_a));
    if (!(w_hi > w_lo)) {
        return 0.0;
    }
    const Backend ba = natural_backend(beta_a);
    const Backend bb = natural_backend(beta_b);
    auto integrand = [&](double w) {
        const double u = std::exp(w);
        const double fb = standard_single(beta_b, u, bb, cfg).value;
        if (fb == 0.0) {
            return 0.0;
        }
        const double scale = std::exp(-w / a);
        return u * scale * standard_single(beta_a, x * scale, ba, cfg).value * fb;
    };
    quad::QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-10;
    opt.max_intervals = 4000;
    return quad::integrate(integrand, w_lo, w_hi, opt).value;
}

} // namespace detail

/// Evaluable density of the law with Laplace transform exp(-t s^beta).
/// Immutable after construction.
class StablePdf {
public:
    explicit StablePdf(KwwScale scale, Backend backend = Backend::ClosedForm,
                       talbot::TalbotConfig cfg = {})
        : scale_(scale), backend_(backend), cfg_(cfg) {
        cfg_.validate();
        if (backend_ == Backend::ClosedForm && !has_closed_form(scale_.beta)) {
            throw BackendError("closed-form backend unavailable for beta = " + scale_.beta.str());
        }
        if (backend_ == Backend::Composition) {
            factors_ = find_factors(scale_.beta);
            if (!factors_) {
                throw BackendError("beta = " + scale_.beta.str() +
                                   " is not a product of two closed-form values");
            }
        }
    }

    /// Composition backend with explicit factors beta_a * beta_b = beta.
    static StablePdf composition(double t, const Rational& beta_a, const Rational& beta_b,
                                 talbot::TalbotConfig cfg = {}) {
        const Rational beta = beta_a * beta_b;
        StablePdf d(KwwScale(beta, t), Backend::Talbot, cfg);
        d.backend_ = Backend::Composition;
        d.factors_ = std::make_pair(beta_a, beta_b);
        return d;
    }

    /// Closed form when available, Talbot otherwise.
    static StablePdf best_available(KwwScale scale, talbot::TalbotConfig cfg = {}) {
        return StablePdf(scale, detail::natural_backend(scale.beta), cfg);
    }

    const KwwScale& scale() const { return scale_; }
    Backend backend() const { return backend_; }
    const talbot::TalbotConfig& talbot_config() const { return cfg_; }
    std::optional<std::pair<Rational, Rational>> factors() const { return factors_; }

    /// Unit-scale density f_beta(x).
    PdfEval evaluate_standard(double x) const {
        if (!(x > 0.0)) {
            throw DomainError("density argument must be > 0 (interference power is positive)");
        }
        if (backend_ == Backend::Composition) {
            return {detail::compose_standard(factors_->first, factors_->second, x, cfg_),
                    Backend::Composition, false};
        }
        return detail::standard_single(scale_.beta, x, backend_, cfg_);
    }

    /// Density at interference power I > 0, with provenance.
    PdfEval evaluate(double interference) const {
        if (!(interference > 0.0)) {
            throw DomainError("pdf: interference power must be > 0");
        }
        const double u = scale_.unit();
        PdfEval e = evaluate_standard(interference / u);
        e.value /= u;
        return e;
    }

    double pdf(double interference) const { return evaluate(interference).value; }

    /// Unit-scale CDF.
    double cdf_standard(double x) const {
        if (!(x > 0.0)) {
            throw DomainError("cdf: argument must be > 0");
        }
        const Rational& beta = scale_.beta;
        if (beta == Rational{1, 2} && backend_ != Backend::Talbot) {
            return std::erfc(1.0 / (2.0 * std::sqrt(x)));
        }
        if (backend_ == Backend::Talbot) {
            const double v = talbot::invert_kww_cdf_at(KwwScale(beta, 1.0), x, cfg_).value;
            return std::clamp(v, 0.0, 1.0);
        }
        const double x_lo = left_tail_cutoff(beta);
        if (x <= x_lo) {
            return 0.0;
        }
        const double x_sw = survival_switch(beta);
        if (x >= x_sw) {
            return std::clamp(1.0 - survival_series(beta, x), 0.0, 1.0);
        }
        auto integrand = [this](double w) {
            const double v = std::exp(w);
            return evaluate_standard(v).value * v;
        };
        quad::QuadOptions opt;
        opt.abs_tol = 1e-10;
        const double v = quad::integrate(integrand, std::log(x_lo), std::log(x), opt).value;
        return std::clamp(v, 0.0, 1.0);
    }

    /// P[I <= interference].
    double cdf(double interference) const {
        if (!(interference > 0.0)) {
            throw DomainError("cdf: interference power must be > 0");
        }
        return cdf_standard(interference / scale_.unit());
    }

    /// Factorization of beta into two closed-form values, if one exists.
    static std::optional<std::pair<Rational, Rational>> find_factors(const Rational& beta) {
        for (const Rational& a : closed_form_betas()) {
            for (const Rational& b : closed_form_betas()) {
                if (a * b == beta) {
                    return std::make_pair(a, b);
                }
            }
        }
        return std::nullopt;
    }

private:
    KwwScale scale_;
    Backend backend_;
    talbot::TalbotConfig cfg_;
    std::optional<std::pair<Rational, Rational>> factors_;
};

inline double pdf(const StablePdf& d, double interference) { return d.pdf(interference); }
inline double cdf(const StablePdf& d, double interference) { return d.cdf(interference); }

/// Density of the beta_a * beta_b law at I, with scale t, by the
/// composition integral over the two factor densities.
inline double compose_pdf(const Rational& beta_a, const Rational& beta_b, double t, double interference,
                          const talbot::TalbotConfig& cfg = {}) {
    const Rational beta = beta_a * beta_b;
    if (!(beta.num() > 0 && beta.num() < beta.den())) {
        throw DomainError("compose_pdf: beta_a * beta_b must lie in (0, 1)");
    }
    return StablePdf::composition(t, beta_a, beta_b, cfg).pdf(interference);
}

/// int_0^inf exp(-s I) pdf(I) dI by quadrature on the unit scale.
inline double numerical_laplace_transform(const StablePdf& d, double s) {
    if (!(s >= 0.0)) {
        throw DomainError("numerical_laplace_transform: s must be >= 0");
    }
    const Rational& beta = d.scale().beta;
    const double sigma = s * d.scale().unit();
    const double x_lo = left_tail_cutoff(beta);
    const double x_sw = survival_switch(beta);
    // e^{-sigma x} < e^{-60} beyond x_hi; below x_sw the survival series is unused
    const double x_hi = sigma > 0.0 ? std::max(x_sw, 60.0 / sigma) : x_sw;
    auto integrand = [&](double w) {
        const double x = std::exp(w);
        return std::exp(-sigma * x) * d.evaluate_standard(x).value * x;
    };
    quad::QuadOptions opt;
    opt.abs_tol = 1e-11;
    opt.max_intervals = 4000;
    double v = quad::integrate(integrand, std::log(x_lo), std::log(x_hi), opt).value;
    if (sigma == 0.0) {
        v += survival_series(beta, x_hi);
    }
    return v;
}

/// Total probability mass: quadrature up to the survival switch point plus
/// the analytic heavy-tail mass beyond it.
inline double normalization(const StablePdf& d) {
    return numerical_laplace_transform(d, 0.0);
}

/// CDF of a StablePdf tabulated once on a logarithmic grid and evaluated by
/// cubic Hermite interpolation with the exact density as the derivative.
/// Intended for callers that need the CDF at many points.
class TabulatedCdf {
public:
    explicit TabulatedCdf(const StablePdf& d, double step = 0.01) : beta_(d.scale().beta), unit_(d.scale().unit()) {
        if (!(step > 0.0 && step <= 0.1)) {
            throw DomainError("TabulatedCdf: step must lie in (0, 0.1]");
        }
        levy_ = beta_ == Rational{1, 2} && d.backend() != Backend::Talbot;
        if (levy_) {
            return;
        }
        x_lo_ = left_tail_cutoff(beta_);
        x_sw_ = survival_switch(beta_);
        w0_ = std::log(x_lo_);
        const double w1 = std::log(x_sw_);
        const int n = std::max(2, static_cast<int>(std::ceil((w1 - w0_) / step)));
        h_ = (w1 - w0_) / n;
        auto dfdw = [&d](double w) {
            const double x = std::exp(w);
            return x * d.evaluate_standard(x).value;
        };
        values_.resize(static_cast<std::size_t>(n) + 1);
        slopes_.resize(values_.size());
        quad::QuadOptions opt;
        opt.abs_tol = 1e-14;
        opt.max_intervals = 4;
        // Talbot-backed densities carry ~1e-9 noise; keep the best estimate
        opt.throw_on_failure = false;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double w = w0_ + h_ * i;
            if (i > 0) {
                acc += quad::integrate(dfdw, w - h_, w, opt).value;
            }
            values_[static_cast<std::size_t>(i)] = acc;
            slopes_[static_cast<std::size_t>(i)] = dfdw(w);
        }
    }

    /// P[X <= x] for the unit-scale law.
    double standard(double x) const {
        if (!(x > 0.0)) {
            return 0.0;
        }
        if (levy_) {
            return std::erfc(1.0 / (2.0 * std::sqrt(x)));
        }
        if (x <= x_lo_) {
            return 0.0;
        }
        if (x >= x_sw_) {
            return std::clamp(1.0 - survival_series(beta_, x), 0.0, 1.0);
        }
        const double pos = (std::log(x) - w0_) / h_;
        const auto i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
        const double u = pos - static_cast<double>(i);
        const double u2 = u * u;
        const double u3 = u2 * u;
        const double v = (2.0 * u3 - 3.0 * u2 + 1.0) * values_[i] + (u3 - 2.0 * u2 + u) * h_ * slopes_[i] +
                         (-2.0 * u3 + 3.0 * u2) * values_[i + 1] + (u3 - u2) * h_ * slopes_[i + 1];
        return std::clamp(v, 0.0, 1.0);
    }

    /// P[I <= interference]; 0 for interference <= 0.
    double operator()(double interference) const { return standard(interference / unit_); }

    /// Tabulated CDF at the upper end of the grid minus the analytic value
    /// there; a measure of the accumulated quadrature error.
    double closure_error() const {
        if (levy_) {
            return 0.0;
        }
        return values_.back() - (1.0 - survival_series(beta_, x_sw_));
    }

private:
    Rational beta_;
    double unit_;
    bool levy_ = false;
    double x_lo_ = 0.0;
    double x_sw_ = 0.0;
    double w0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

} // namespace kwwint::stable
