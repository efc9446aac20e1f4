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

// Numerical inverse Laplace transform on deformed Bromwich contours.
//
// Fixed Talbot: the contour is s(theta) = r theta (cot theta + i), theta in
// (-pi, pi), with r = 2M / (5 I). The trapezoid rule on M nodes gives
// roughly 0.6 M correct digits, limited by roundoff that grows like
// exp(0.4 M); sums are therefore carried in long double.
//
// The Talbot contour runs off to arg s = +-pi. For exp(-t s^beta) with
// beta > 1/2 the transform grows there, so those inversions use a
// hyperbolic contour s(u) = mu (1 + sin(i u - alpha)) whose asymptotes
// (arg s -> pi/2 + alpha) stay inside the sector where it decays.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "kwwint/error.hpp"
#include "kwwint/kww_scale.hpp"

namespace kwwint::talbot {

using cld = std::complex<long double>;
using quad_real = boost::multiprecision::cpp_bin_float_quad;
using quad_complex = boost::multiprecision::cpp_complex_quad;

enum class Contour {
    /// Fixed Talbot, except hyperbolic for KWW transforms with beta > 1/2.
    Auto,
    FixedTalbot,
    Hyperbolic,
};

struct TalbotConfig {
    /// Fixed-Talbot node count M.
    int nodes = 32;
    /// Hyperbolic contour: nodes on each side of the real axis.
    int hyperbolic_nodes = 48;
    /// Warning threshold for the difference against the reduced-node sum.
    double precision_target = 1e-8;
    Contour contour = Contour::Auto;
    /// Sum the KWW contours in 113-bit arithmetic (slow; for reference runs
    /// at large node counts, where long double roundoff grows like e^{0.4 M}).
    bool extended_precision = false;

    void validate() const {
        if (nodes < 8) {
            throw DomainError("TalbotConfig: nodes must be >= 8");
        }
        if (hyperbolic_nodes < 8) {
            throw DomainError("TalbotConfig: hyperbolic_nodes must be >= 8");
        }
    }
};

struct TalbotResult {
    double value = 0.0;
    /// Imaginary part of the full (both half-contours) sum.
    double imag_residue = 0.0;
    /// |f_M - f_{M/2}| (fixed Talbot) or |f_N - f_{2N/3}| (hyperbolic)
    double halving_diff = 0.0;
    bool warning = false;
};

namespace detail {

template <typename Real>
struct ComplexOf {
    using type = std::complex<Real>;
};

template <>
struct ComplexOf<quad_real> {
    using type = quad_complex;
};

// Contour sum with M nodes on each half of the contour. With LogForm the
// callable returns log F(s) and the integrand is exp(s x + log F(s)), which
// avoids overflow of F meeting underflow of e^{s x} near theta = +-pi.
template <bool LogForm, typename Real = long double, typename Fn>
cld contour_sum(const Fn& fn, double time, int nodes) {
    using std::cos;
    using std::exp;
    using std::sin;
    using C = typename ComplexOf<Real>::type;
    const Real pi = boost::math::constants::pi<Real>();
    const Real x = time;
    const Real r = Real(2 * nodes) / (Real(5) * x);
    auto kernel = [&](const C& s) -> C {
        if constexpr (LogForm) {
            return exp(s * x + C(fn(s)));
        } else {
            return exp(s * x) * C(fn(s));
        }
    };

    C sum = kernel(C(r, Real(0))) * Real(0.5);
    for (int k = 1; k < nodes; ++k) {
        for (int sign : {1, -1}) {
            const Real theta = Real(sign * k) * pi / Real(nodes);
            const Real cot = cos(theta) / sin(theta);
            const C s(r * theta * cot, r * theta);
            const Real sigma = theta + (theta * cot - Real(1)) * cot;
            // both halves are summed, so each carries half the usual weight
            sum += kernel(s) * C(Real(0.5), Real(0.5) * sigma);
        }
    }
    sum *= r / Real(nodes);
    return cld(static_cast<long double>(sum.real()), static_cast<long double>(sum.imag()));
}

// Trapezoid rule on s(u) = mu (1 + sin(i u - alpha)), u = k h, |k| <= N.
template <bool LogForm, typename Real = long double, typename Fn>
cld hyperbolic_sum(const Fn& fn, double time, int nodes) {
    using std::cos;
    using std::exp;
    using std::sin;
    using C = typename ComplexOf<Real>::type;
    const Real alpha = Real(6) / Real(10);
    const Real x = time;
    const Real mu = Real(2 * nodes) / Real(10) / x;
    const Real h = Real(3) / Real(nodes);
    C sum(Real(0), Real(0));
    for (int k = -nodes; k <= nodes; ++k) {
        const C w(-alpha, h * Real(k));
        const C s = mu * (C(Real(1), Real(0)) + sin(w));
        C value;
        if constexpr (LogForm) {
            value = exp(s * x + C(fn(s)));
        } else {
            value = exp(s * x) * C(fn(s));
        }
        sum += value * cos(w);
    }
    sum *= h * mu / (Real(2) * boost::math::constants::pi<Real>());
    return cld(static_cast<long double>(sum.real()), static_cast<long double>(sum.imag()));
}

template <bool LogForm, typename Real, typename Fn>
TalbotResult invert_impl(const Fn& fn, double time, const TalbotConfig& cfg, bool hyperbolic) {
    cfg.validate();
    if (!(time > 0.0)) {
        throw DomainError("talbot::invert: time must be > 0");
    }
    cld full;
    cld half;
    if (hyperbolic) {
        full = hyperbolic_sum<LogForm, Real>(fn, time, cfg.hyperbolic_nodes);
        half = hyperbolic_sum<LogForm, Real>(fn, time, 2 * cfg.hyperbolic_nodes / 3);
    } else {
        full = contour_sum<LogForm, Real>(fn, time, cfg.nodes);
        half = contour_sum<LogForm, Real>(fn, time, cfg.nodes / 2);
    }
    TalbotResult out;
    out.value = static_cast<double>(full.real());
    out.imag_residue = static_cast<double>(full.imag());
    out.halving_diff = static_cast<double>(std::abs(full.real() - half.real()));
    out.warning = out.halving_diff > cfg.precision_target;
    if (!std::isfinite(out.value)) {
        throw DomainError("talbot::invert: transform produced a non-finite value");
    }
    return out;
}

// Inversion of a log-transform written generically in the complex type.
template <typename LogFn>
TalbotResult invert_generic_log(const LogFn& log_fn, double time, const TalbotConfig& cfg, bool hyperbolic) {
    if (cfg.extended_precision) {
        return invert_impl<true, quad_real>([&](const quad_complex& s) { return log_fn(s); }, time, cfg,
                                            hyperbolic);
    }
    return invert_impl<true, long double>([&](const cld& s) { return log_fn(s); }, time, cfg, hyperbolic);
}

} // namespace detail

/// Raw contour sum for `transform` (complex<long double> -> complex<long
/// double>). Its imaginary part vanishes for real-valued originals.
template <typename LaplaceFn>
cld contour_sum(const LaplaceFn& transform, double time, int nodes) {
    return detail::contour_sum<false, long double>(transform, time, nodes);
}

/// Invert `transform` at time > 0.
template <typename LaplaceFn>
TalbotResult invert(const LaplaceFn& transform, double time, const TalbotConfig& cfg = {}) {
    return detail::invert_impl<false, long double>(transform, time, cfg, cfg.contour == Contour::Hyperbolic);
}

/// Invert a transform given through its logarithm log F(s).
template <typename LogLaplaceFn>
TalbotResult invert_log(const LogLaplaceFn& log_transform, double time, const TalbotConfig& cfg = {}) {
    return detail::invert_impl<true, long double>(log_transform, time, cfg, cfg.contour == Contour::Hyperbolic);
}

/// log of the stretched exponential, -t s^beta, principal branch of s^beta.
inline cld kww_log_transform(const KwwScale& scale, cld s) {
    return -static_cast<long double>(scale.t) * std::pow(s, static_cast<long double>(scale.beta.value()));
}

inline quad_complex kww_log_transform(const KwwScale& scale, const quad_complex& s) {
    const quad_real beta = quad_real(scale.beta.num()) / quad_real(scale.beta.den());
    return -quad_real(scale.t) * exp(beta * log(s));
}

/// The stretched exponential exp(-t s^beta).
inline cld kww_transform(const KwwScale& scale, cld s) { return std::exp(kww_log_transform(scale, s)); }

/// Whether an inversion of exp(-t s^beta) runs on the hyperbolic contour.
inline bool uses_hyperbolic(const KwwScale& scale, const TalbotConfig& cfg) {
    switch (cfg.contour) {
    case Contour::FixedTalbot: return false;
    case Contour::Hyperbolic: return true;
    case Contour::Auto: return 2 * scale.beta.num() > scale.beta.den();
    }
    return false;
}

/// Inversion of exp(-t s^beta) at one point.
inline TalbotResult invert_kww_at(const KwwScale& scale, double x, const TalbotConfig& cfg = {}) {
    return detail::invert_generic_log([&scale](const auto& s) { return kww_log_transform(scale, s); }, x, cfg,
                                      uses_hyperbolic(scale, cfg));
}

/// Inversion of exp(-t s^beta) over a grid of strictly positive points.
inline std::vector<double> invert_kww(const KwwScale& scale, std::span<const double> grid,
                                      const TalbotConfig& cfg = {}) {
    std::vector<double> out;
    out.reserve(grid.size());
    for (double x : grid) {
        out.push_back(invert_kww_at(scale, x, cfg).value);
    }
    return out;
}

/// CDF of the KWW law by inverting exp(-t s^beta) / s.
inline TalbotResult invert_kww_cdf_at(const KwwScale& scale, double x, const TalbotConfig& cfg = {}) {
    return detail::invert_generic_log(
        [&scale](const auto& s) {
            using std::log;
            return kww_log_transform(scale, s) - log(s);
        },
        x, cfg, uses_hyperbolic(scale, cfg));
}

} // namespace kwwint::talbot
