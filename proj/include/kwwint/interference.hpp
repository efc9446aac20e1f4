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

// Physical interference model: a Poisson field of transmitters with density
// lambda (per km^2), path loss r^{-eta} and i.i.d. fading powers g. The
// aggregate interference at the origin has Laplace transform exp(-t s^beta)
// with beta = 2 / eta and t = pi lambda E[g^{2/eta}] Gamma(1 - 2/eta).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "kwwint/error.hpp"
#include "kwwint/kww_scale.hpp"
#include "kwwint/quadrature.hpp"
#include "kwwint/specfun.hpp"

namespace kwwint {

struct NetworkParams {
    /// Transmitters per km^2.
    double lambda = 1.0;
    /// Path-loss exponent.
    int eta = 4;

    NetworkParams() = default;
    bool operator==(const NetworkParams&) const = default;
    NetworkParams(double density, int exponent) : lambda(density), eta(exponent) {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw DomainError("NetworkParams: lambda must be a finite value > 0");
        }
        if (eta == 2) {
            throw PoleError("NetworkParams: eta = 2 makes the interference diverge (Gamma(1 - 2/eta) has a pole)");
        }
        if (eta < 3) {
            throw DomainError("NetworkParams: eta must be an integer >= 3");
        }
    }
};

/// Exponentially distributed power with rate mu (mean 1/mu).
struct Rayleigh {
    double mu = 1.0;
    bool operator==(const Rayleigh&) const = default;
};

/// Gamma distributed power with shape m and mean pr.
struct Nakagami {
    double m = 1.0;
    double pr = 1.0;
    bool operator==(const Nakagami&) const = default;
};

/// Power of a line-of-sight component plus complex Gaussian scatter, with
/// K-factor k and mean pr.
struct Rician {
    double k = 0.0;
    double pr = 1.0;
    bool operator==(const Rician&) const = default;
};

class FadingModel {
public:
    using Variant = std::variant<Rayleigh, Nakagami, Rician>;

    FadingModel() : model_(Rayleigh{}) {}
    FadingModel(Rayleigh r) : model_(r) { validate(); }
    FadingModel(Nakagami n) : model_(n) { validate(); }
    FadingModel(Rician r) : model_(r) { validate(); }

    static FadingModel rayleigh(double mu) { return Rayleigh{mu}; }
    static FadingModel nakagami(double m, double pr) { return Nakagami{m, pr}; }
    static FadingModel rician(double k, double pr) { return Rician{k, pr}; }

    /// Nakagami model with m = (K+1)^2 / (2K+1), the usual moment-matched
    /// stand-in for Rician fading. Differs from the exact Rician law by up
    /// to a few percent in fractional moments.
    static FadingModel rician_as_nakagami(double k, double pr) {
        if (!(k >= 0.0)) {
            throw DomainError("rician_as_nakagami: K must be >= 0");
        }
        return Nakagami{(k + 1.0) * (k + 1.0) / (2.0 * k + 1.0), pr};
    }

    const Variant& variant() const { return model_; }
    bool operator==(const FadingModel&) const = default;

    std::string name() const {
        return std::visit(
            [](const auto& f) -> std::string {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Rayleigh>) {
                    return "rayleigh";
                } else if constexpr (std::is_same_v<T, Nakagami>) {
                    return "nakagami";
                } else {
                    return "rician";
                }
            },
            model_);
    }

    double mean_power() const {
        return std::visit(
            [](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Rayleigh>) {
                    return 1.0 / f.mu;
                } else {
                    return f.pr;
                }
            },
            model_);
    }

    /// Density of the fading power at g >= 0.
    double pdf(double g) const {
        if (g < 0.0) {
            return 0.0;
        }
        return std::visit(
            [g](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Rayleigh>) {
                    return f.mu * std::exp(-f.mu * g);
                } else if constexpr (std::is_same_v<T, Nakagami>) {
                    if (g == 0.0) {
                        return f.m < 1.0 ? std::numeric_limits<double>::infinity()
                                         : (f.m == 1.0 ? 1.0 / f.pr : 0.0);
                    }
                    const double rate = f.m / f.pr;
                    return std::exp(f.m * std::log(rate) + (f.m - 1.0) * std::log(g) - rate * g -
                                    specfun::log_gamma(f.m));
                } else {
                    const double s = f.pr / (1.0 + f.k);
                    const double z = 2.0 * std::sqrt(f.k * g / s);
                    // I0(z) = e^z * scaled; combine exponents before exp
                    return std::exp(-f.k - g / s + z) * specfun::bessel_i0_scaled(z) / s;
                }
            },
            model_);
    }

    /// A power level x with P[g > x] <= eps (Chernoff bound for Nakagami and
    /// Rician, exact for Rayleigh).
    double tail_quantile_bound(double eps) const {
        if (!(eps > 0.0 && eps < 1.0)) {
            throw DomainError("tail_quantile_bound: eps must lie in (0, 1)");
        }
        const double l = -std::log(eps);
        return std::visit(
            [l](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Rayleigh>) {
                    return l / f.mu;
                } else if constexpr (std::is_same_v<T, Nakagami>) {
                    // E[e^{g/(2 theta)}] = 2^m with theta = pr/m
                    return 2.0 * f.pr / f.m * (f.m * std::numbers::ln2 + l);
                } else {
                    // E[e^{g/(2s)}] = 2 e^K with s = pr/(K+1)
                    const double s = f.pr / (1.0 + f.k);
                    return 2.0 * s * (std::numbers::ln2 + f.k + l);
                }
            },
            model_);
    }

    /// Draw one fading power.
    template <typename Rng>
    double sample(Rng& rng) const {
        return std::visit(
            [&rng](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Rayleigh>) {
                    return std::exponential_distribution<double>(f.mu)(rng);
                } else if constexpr (std::is_same_v<T, Nakagami>) {
                    return std::gamma_distribution<double>(f.m, f.pr / f.m)(rng);
                } else {
                    // |nu + X|^2 with X complex Gaussian of power s, |nu|^2 = K s
                    const double s = f.pr / (1.0 + f.k);
                    std::normal_distribution<double> n(0.0, std::sqrt(s / 2.0));
                    const double re = std::sqrt(f.k * s) + n(rng);
                    const double im = n(rng);
                    return re * re + im * im;
                }
            },
            model_);
    }

private:
    void validate() const {
        std::visit(
            [](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Rayleigh>) {
                    if (!(f.mu > 0.0) || !std::isfinite(f.mu)) {
                        throw DomainError("Rayleigh fading: mu must be a finite value > 0");
                    }
                } else if constexpr (std::is_same_v<T, Nakagami>) {
                    if (!(f.m >= 0.5) || !std::isfinite(f.m)) {
                        throw DomainError("Nakagami fading: m must be a finite value >= 0.5");
                    }
                    if (!(f.pr > 0.0) || !std::isfinite(f.pr)) {
                        throw DomainError("Nakagami fading: pr must be a finite value > 0");
                    }
                } else {
                    if (!(f.k >= 0.0) || !std::isfinite(f.k)) {
                        throw DomainError("Rician fading: K must be a finite value >= 0");
                    }
                    if (!(f.pr > 0.0) || !std::isfinite(f.pr)) {
                        throw DomainError("Rician fading: pr must be a finite value > 0");
                    }
                }
            },
            model_);
    }

    Variant model_;
};

namespace detail {

inline double rician_fractional_moment(const Rician& f, double p) {
    const double s = f.pr / (1.0 + f.k);
    const FadingModel model(f);
    // mass above g_hi is below 1e-20: P[sqrt(g) > sqrt(K s) + r] <= exp(-r^2 / s)
    const double g_hi = std::pow(std::sqrt(f.k * s) + std::sqrt(46.0 * s), 2);
    const double g_lo = 1e-30 * s;
    auto integrand = [&](double w) {
        const double g = std::exp(w);
        return std::pow(g, p + 1.0) * model.pdf(g);
    };
    quad::QuadOptions opt;
    opt.abs_tol = 1e-11 * std::pow(s, p);
    opt.max_intervals = 2000;
    return quad::integrate(integrand, std::log(g_lo), std::log(g_hi), opt).value;
}

} // namespace detail

/// E[g^{2/eta}] of the fading power.
inline double fractional_moment(const FadingModel& f, int eta) {
    if (eta < 3) {
        throw DomainError("fractional_moment: eta must be >= 3");
    }
    const double p = 2.0 / eta;
    return std::visit(
        [p](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Rayleigh>) {
                return specfun::gamma(1.0 + p) / std::pow(m.mu, p);
            } else if constexpr (std::is_same_v<T, Nakagami>) {
                return specfun::gamma_ratio(m.m + p, m.m) / std::pow(m.m / m.pr, p);
            } else {
                return detail::rician_fractional_moment(m, p);
            }
        },
        f.variant());
}

/// The (beta, t) pair of the interference Laplace transform.
inline KwwScale kww_scale(const NetworkParams& net, const FadingModel& f) {
    const double beta = 2.0 / net.eta;
    const double t = std::numbers::pi * net.lambda * fractional_moment(f, net.eta) * specfun::gamma(1.0 - beta);
    return KwwScale(Rational(2, net.eta), t);
}

/// exp(-t s^beta).
inline double laplace_transform(const KwwScale& scale, double s) {
    if (!(s >= 0.0)) {
        throw DomainError("laplace_transform: s must be >= 0");
    }
    return std::exp(-scale.t * std::pow(s, scale.beta.value()));
}

/// Laplace transform under Rayleigh fading in its specialized form
/// exp(-pi lambda (s/mu)^beta * pi beta / sin(pi beta)).
inline double rayleigh_laplace_transform(const NetworkParams& net, double mu, double s) {
    if (!(s >= 0.0)) {
        throw DomainError("rayleigh_laplace_transform: s must be >= 0");
    }
    const double beta = 2.0 / net.eta;
    const double pb = std::numbers::pi * beta;
    return std::exp(-std::numbers::pi * net.lambda * std::pow(s / mu, beta) * pb / std::sin(pb));
}

/// Largest relative deviation between the specialized Rayleigh transform and
/// the generic moment-based one over `s_grid`. Transform values are compared
/// where they exceed 1e-100; below that a relative error of the value is just
/// the absolute rounding of an exponent in the hundreds, so the exponents
/// -log L are compared instead.
inline double rayleigh_lt_identity_check(const NetworkParams& net, double mu, const std::vector<double>& s_grid) {
    const KwwScale scale = kww_scale(net, FadingModel::rayleigh(mu));
    const double beta = scale.beta.value();
    const double pb = std::numbers::pi * beta;
    double worst = 0.0;
    for (double s : s_grid) {
        const double a = rayleigh_laplace_transform(net, mu, s);
        const double b = laplace_transform(scale, s);
        if (b >= 1e-100) {
            worst = std::max(worst, std::abs(a / b - 1.0));
        } else {
            const double ea = std::numbers::pi * net.lambda * std::pow(s / mu, beta) * pb / std::sin(pb);
            const double eb = scale.t * std::pow(s, beta);
            worst = std::max(worst, std::abs(ea / eb - 1.0));
        }
    }
    return worst;
}

/// Default grid: s = 0 and 10^{-3} ... 10^{3}.
inline double rayleigh_lt_identity_check(const NetworkParams& net, double mu) {
    std::vector<double> grid = {0.0};
    for (int i = -30; i <= 30; ++i) {
        grid.push_back(std::pow(10.0, i / 10.0));
    }
    return rayleigh_lt_identity_check(net, mu, grid);
}

} // namespace kwwint
