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

// Self-contained special functions needed by the closed-form densities:
// Gamma, modified Bessel I_0 and K_v (fractional v), and the generalized
// hypergeometric series pFq with p <= q.
//
// Everything here is a pure function of its arguments.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kwwint/error.hpp"

namespace kwwint::specfun {

namespace detail {

// Lanczos approximation, g = 7, n = 9.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Lanczos sum A_g(x) for x >= 0.5 (argument already shifted by -1).
inline double lanczos_sum(double xm1) {
    double a = lanczos_coef[0];
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i) {
        a += lanczos_coef[i] / (xm1 + static_cast<double>(i));
    }
    return a;
}

// Neumaier (improved Kahan) compensated accumulator.
template <typename T>
struct CompensatedSum {
    T sum{0};
    T comp{0};

    void add(T v) {
        const T s = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - s) + v;
        } else {
            comp += (v - s) + sum;
        }
        sum = s;
    }
    T value() const { return sum + comp; }
};

} // namespace detail

/// Gamma function. Lanczos (g = 7) for x >= 1/2, reflection below.
inline double gamma(double x) {
    if (detail::is_nonpositive_integer(x)) {
        std::ostringstream os;
        os << "gamma: pole at x = " << x;
        throw PoleError(os.str());
    }
    if (x < 0.5) {
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
    }
    const double xm1 = x - 1.0;
    const double t = xm1 + detail::lanczos_g + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, xm1 + 0.5) * std::exp(-t) *
           detail::lanczos_sum(xm1);
}

/// log|Gamma(x)|, for arguments where Gamma itself overflows (x > ~171).
inline double log_gamma(double x) {
    if (detail::is_nonpositive_integer(x)) {
        std::ostringstream os;
        os << "log_gamma: pole at x = " << x;
        throw PoleError(os.str());
    }
    if (x < 0.5) {
        return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * x))) -
               log_gamma(1.0 - x);
    }
    const double xm1 = x - 1.0;
    const double t = xm1 + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
           std::log(detail::lanczos_sum(xm1));
}

/// Gamma(a) / Gamma(b) for positive a, b, stable for large arguments.
inline double gamma_ratio(double a, double b) {
    if (a < 150.0 && b < 150.0) {
        return gamma(a) / gamma(b);
    }
    return std::exp(log_gamma(a) - log_gamma(b));
}

/// Modified Bessel function of the first kind, order zero, scaled by e^{-z}.
inline double bessel_i0_scaled(double z) {
    if (z < 0.0) {
        z = -z;
    }
    if (z <= 30.0) {
        // sum (z^2/4)^k / (k!)^2, all terms positive
        const long double q = static_cast<long double>(z) * z / 4.0L;
        long double term = 1.0L;
        long double sum = 1.0L;
        for (int k = 1; k < 500; ++k) {
            term *= q / (static_cast<long double>(k) * k);
            sum += term;
            if (term < 1e-20L * sum) {
                break;
            }
        }
        return static_cast<double>(sum * std::exp(-static_cast<long double>(z)));
    }
    // Hankel expansion: e^z / sqrt(2 pi z) * sum_k ((2k-1)!!)^2 / (k! (8z)^k)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (k * 8.0 * z);
        if (std::abs(next) > std::abs(term)) {
            break;
        }
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * sum) {
            break;
        }
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

/// Modified Bessel function of the first kind, order zero.
inline double bessel_i0(double z) {
    return bessel_i0_scaled(z) * std::exp(std::abs(z));
}

/// Fractional Bessel order. Integer orders are not supported.
class BesselOrder {
public:
    explicit BesselOrder(double order) : order_(order) {
        if (!(order >= 0.0) || !std::isfinite(order)) {
            throw DomainError("BesselOrder: order must be a finite value >= 0");
        }
        if (order == std::floor(order)) {
            throw DomainError("BesselOrder: integer orders are not supported");
        }
    }
    double value() const { return order_; }

private:
    double order_;
};

/// Below this argument K_v uses the reflection of the ascending I_{+-v}
/// series; above it the trapezoid rule on the cosh integral.
inline constexpr double bessel_k_series_limit = 2.0;

namespace detail {

// K_v(z) = pi/2 (I_{-v}(z) - I_v(z)) / sin(v pi), small z.
inline long double bessel_k_series(double v, double z) {
    const long double half = static_cast<long double>(z) / 2.0L;
    const long double q = half * half;
    auto i_series = [&](double nu) {
        // (z/2)^nu / Gamma(nu + 1) * sum q^k / (k! (nu+1)_k)
        long double term = std::pow(half, static_cast<long double>(nu)) / gamma(nu + 1.0);
        long double sum = term;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<long double>(k) * (nu + k));
            sum += term;
            if (std::abs(term) < 1e-21L * std::abs(sum)) {
                break;
            }
        }
        return sum;
    };
    const long double diff = i_series(-v) - i_series(v);
    return std::numbers::pi_v<long double> / 2.0L * diff /
           std::sin(std::numbers::pi_v<long double> * v);
}

// e^z K_v(z) = int_0^inf exp(-z (cosh u - 1)) cosh(v u) du by the trapezoid
// rule; the integrand is entire and decays double-exponentially, so the rule
// converges geometrically in 1/h. The step shrinks like 1/sqrt(z) to bound
// growth of the integrand off the real axis.
inline long double bessel_k_scaled_integral(double v, double z) {
    const long double h = std::min(0.1L, 0.6L / std::sqrt(static_cast<long double>(z)));
    long double sum = 0.5L;
    for (int k = 1; k < 100000; ++k) {
        const long double u = h * k;
        const long double f = std::exp(-z * (std::cosh(u) - 1.0L)) * std::cosh(v * u);
        sum += f;
        if (f < 1e-21L * sum) {
            break;
        }
    }
    return h * sum;
}

} // namespace detail

/// Modified Bessel function of the second kind scaled by e^{z}: e^z K_v(z).
inline double bessel_k_scaled(const BesselOrder& order, double z) {
    if (!(z > 0.0)) {
        throw DomainError("bessel_k: argument must be > 0");
    }
    if (z <= bessel_k_series_limit) {
        return static_cast<double>(detail::bessel_k_series(order.value(), z) *
                                   std::exp(static_cast<long double>(z)));
    }
    return static_cast<double>(detail::bessel_k_scaled_integral(order.value(), z));
}

/// Modified Bessel function of the second kind K_v(z), z > 0.
inline double bessel_k(const BesselOrder& order, double z) {
    if (!(z > 0.0)) {
        throw DomainError("bessel_k: argument must be > 0");
    }
    if (z <= bessel_k_series_limit) {
        return static_cast<double>(detail::bessel_k_series(order.value(), z));
    }
    return static_cast<double>(detail::bessel_k_scaled_integral(order.value(), z) *
                               std::exp(-static_cast<long double>(z)));
}

/// Parameter lists of a generalized hypergeometric function pFq.
struct HypergeometricSpec {
    std::vector<double> upper;
    std::vector<double> lower;

    HypergeometricSpec(std::vector<double> a, std::vector<double> b)
        : upper(std::move(a)), lower(std::move(b)) {
        if (upper.size() > lower.size()) {
            throw DomainError("HypergeometricSpec: only p <= q is supported");
        }
        for (double bj : lower) {
            if (detail::is_nonpositive_integer(bj)) {
                throw PoleError("HypergeometricSpec: lower parameter is a non-positive integer");
            }
        }
    }
};

/// The parameter block b/a, (b+1)/a, ..., (b+a-1)/a.
inline std::vector<double> delta_block(int a, double b) {
    if (a < 1) {
        throw DomainError("delta_block: a must be >= 1");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i) {
        out.push_back((b + i) / a);
    }
    return out;
}

/// Outcome of a series summation. `error_estimate` bounds the absolute
/// rounding error from cancellation between terms.
struct SeriesResult {
    double value = 0.0;
    bool converged = false;
    int terms = 0;
    double max_term = 0.0;
    double error_estimate = 0.0;
};

inline constexpr int phyp_max_terms = 500;
/// Largest |z| for which phyp() promises a reliable sum.
inline constexpr double phyp_reliable_bound = 1e4;

/// Sum the pFq series, accumulating in extended precision. Never throws on
/// non-convergence; inspect `converged` and `error_estimate`.
inline SeriesResult phyp_series(const HypergeometricSpec& spec, double z,
                                int max_terms = phyp_max_terms) {
    using ld = long double;
    SeriesResult r;
    detail::CompensatedSum<ld> acc;
    ld term = 1.0L;
    ld max_term = 1.0L;
    acc.add(term);
    const ld zl = z;
    int n = 0;
    for (; n < max_terms; ++n) {
        ld ratio = zl / static_cast<ld>(n + 1);
        for (double a : spec.upper) {
            ratio *= static_cast<ld>(a) + n;
        }
        for (double b : spec.lower) {
            ratio /= static_cast<ld>(b) + n;
        }
        term *= ratio;
        acc.add(term);
        max_term = std::max(max_term, std::abs(term));
        if (term == 0.0L) {
            r.converged = true;
            break;
        }
        if (std::abs(ratio) < 1.0L &&
            std::abs(term) < 1e-16L * std::abs(acc.value())) {
            r.converged = true;
            break;
        }
    }
    r.terms = n + 1;
    r.value = static_cast<double>(acc.value());
    r.max_term = static_cast<double>(max_term);
    r.error_estimate = static_cast<double>(
        max_term * std::numeric_limits<ld>::epsilon() * std::sqrt(static_cast<ld>(r.terms)) * 4.0L);
    return r;
}

/// pFq(a; b; z) for p <= q. Throws ConvergenceError outside the reliable
/// summation bound or when the term budget is exhausted.
inline double phyp(const HypergeometricSpec& spec, double z) {
    if (std::abs(z) > phyp_reliable_bound) {
        throw ConvergenceError("phyp: |z| beyond the reliable summation bound");
    }
    const SeriesResult r = phyp_series(spec, z);
    if (!r.converged) {
        throw ConvergenceError("phyp: series did not converge within the term budget");
    }
    return r.value;
}

/// Beyond this |z| (z < 0) kummer_1f1 uses the large-argument expansion.
inline constexpr double kummer_asymptotic_limit = 40.0;

/// 1F1(a; b; z) with its error estimate. Negative z goes through the Kummer
/// transformation 1F1(a;b;z) = e^z 1F1(b-a;b;-z) so the summed terms share a
/// sign; for very negative z the algebraic large-argument expansion is used.
inline SeriesResult kummer_1f1_series(double a, double b, double z) {
    if (detail::is_nonpositive_integer(b)) {
        throw PoleError("kummer_1f1: b is a non-positive integer");
    }
    if (z >= 0.0) {
        return phyp_series(HypergeometricSpec({a}, {b}), z);
    }
    const double x = -z;
    const double c = b - a;
    const bool terminating = detail::is_nonpositive_integer(c);
    if (x <= kummer_asymptotic_limit || terminating) {
        SeriesResult r = phyp_series(HypergeometricSpec({c}, {b}), x);
        const double scale = std::exp(-x);
        r.value *= scale;
        r.max_term *= scale;
        r.error_estimate *= scale;
        return r;
    }
    // 1F1(a;b;-x) ~ Gamma(b)/Gamma(b-a) x^{-a} sum_s (a)_s (a-b+1)_s / (s! x^s)
    using ld = long double;
    const ld pref = static_cast<ld>(gamma(b) / gamma(c)) * std::pow(static_cast<ld>(x), -static_cast<ld>(a));
    ld term = 1.0L;
    ld sum = 1.0L;
    int s = 0;
    for (; s < 200; ++s) {
        const ld next = term * (a + s) * (a - b + 1.0 + s) / ((s + 1.0L) * x);
        if (std::abs(next) >= std::abs(term)) {
            break;
        }
        term = next;
        sum += term;
        if (std::abs(term) < 1e-19L * std::abs(sum)) {
            break;
        }
    }
    SeriesResult r;
    r.converged = true;
    r.terms = s + 1;
    r.value = static_cast<double>(pref * sum);
    r.max_term = static_cast<double>(std::abs(pref));
    // truncation ~ last term, plus the dropped exponentially small branch
    r.error_estimate = static_cast<double>(std::abs(pref * term)) +
                       std::abs(gamma(b) / gamma(a)) * std::exp(-x) * std::pow(x, a - b);
    return r;
}

/// Confluent hypergeometric function 1F1(a; b; z).
inline double kummer_1f1(double a, double b, double z) {
    const SeriesResult r = kummer_1f1_series(a, b, z);
    if (!r.converged) {
        throw ConvergenceError("kummer_1f1: series did not converge within the term budget");
    }
    return r.value;
}

} // namespace kwwint::specfun
