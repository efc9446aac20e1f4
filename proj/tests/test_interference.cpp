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

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include "kwwint/interference.hpp"
#include "oracle.hpp"

using namespace kwwint;

namespace {

// E[g^p] for Rician power, from Boost's noncentral chi-square density:
// g = (s/2) X with X ~ chi'^2(2, 2K).
double rician_moment_oracle(double k, double pr, double p) {
    const double s = pr / (1.0 + k);
    boost::math::non_central_chi_squared_distribution<double> chi(2.0, 2.0 * k);
    boost::math::quadrature::exp_sinh<double> integrator;
    const double m = integrator.integrate([&](double x) { return std::pow(x, p) * boost::math::pdf(chi, x); });
    return std::pow(s / 2.0, p) * m;
}

} // namespace

TEST(NetworkParams, Validation) {
    EXPECT_NO_THROW(NetworkParams(2.0, 3));
    EXPECT_THROW(NetworkParams(2.0, 2), PoleError);
    EXPECT_THROW(NetworkParams(2.0, 1), DomainError);
    EXPECT_THROW(NetworkParams(0.0, 4), DomainError);
    EXPECT_THROW(NetworkParams(-1.0, 4), DomainError);
}

TEST(FadingModel, Validation) {
    EXPECT_THROW(FadingModel::rayleigh(0.0), DomainError);
    EXPECT_THROW(FadingModel::nakagami(0.4, 1.0), DomainError);
    EXPECT_THROW(FadingModel::nakagami(2.0, 0.0), DomainError);
    EXPECT_THROW(FadingModel::rician(-1.0, 1.0), DomainError);
    EXPECT_NO_THROW(FadingModel::rician(0.0, 1.0));
    EXPECT_EQ(FadingModel::rician(3.0, 1.0).name(), "rician");
}

TEST(FractionalMoment, RayleighAndNakagamiUnit) {
    const double want = std::sqrt(std::numbers::pi) / 2.0;
    EXPECT_NEAR(fractional_moment(FadingModel::rayleigh(1.0), 4), want, 1e-15);
    EXPECT_NEAR(fractional_moment(FadingModel::nakagami(1.0, 1.0), 4), want, 1e-15);
    for (int eta = 3; eta <= 12; ++eta) {
        for (double pr : {0.3, 1.0, 4.0}) {
            EXPECT_NEAR(fractional_moment(FadingModel::nakagami(1.0, pr), eta),
                        fractional_moment(FadingModel::rayleigh(1.0 / pr), eta), 1e-14)
                << eta << ' ' << pr;
        }
    }
}

TEST(FractionalMoment, RicianAgainstNoncentralChiSquare) {
    for (double k : {0.0, 0.5, 1.0, 5.0, 10.0, 40.0}) {
        for (int eta : {3, 4, 6}) {
            const double want = rician_moment_oracle(k, 1.3, 2.0 / eta);
            EXPECT_NEAR(fractional_moment(FadingModel::rician(k, 1.3), eta), want, 1e-9) << k << ' ' << eta;
        }
    }
}

TEST(FractionalMoment, RicianZeroKIsRayleigh) {
    for (int eta : {3, 4, 5, 8}) {
        for (double pr : {0.5, 1.0, 2.0}) {
            EXPECT_NEAR(fractional_moment(FadingModel::rician(0.0, pr), eta),
                        fractional_moment(FadingModel::rayleigh(1.0 / pr), eta), 1e-8);
        }
    }
}

TEST(FractionalMoment, RicianNakagamiApproximationWithinTwoPercent) {
    for (double k : {1.0, 5.0, 10.0}) {
        for (int eta : {3, 4, 6}) {
            const double exact = fractional_moment(FadingModel::rician(k, 1.0), eta);
            const double approx = fractional_moment(FadingModel::rician_as_nakagami(k, 1.0), eta);
            EXPECT_LT(std::abs(approx / exact - 1.0), 0.02) << k << ' ' << eta;
        }
    }
}

TEST(FractionalMoment, MonotoneInMeanPower) {
    oracle::Gen g(3);
    for (int n = 0; n < 300; ++n) {
        const double m = g.uniform(0.5, 20.0);
        const int eta = g.integer(3, 12);
        const double p1 = g.log_uniform(0.01, 100.0);
        const double p2 = p1 * g.uniform(1.001, 3.0);
        EXPECT_LT(fractional_moment(FadingModel::nakagami(m, p1), eta),
                  fractional_moment(FadingModel::nakagami(m, p2), eta));
    }
}

TEST(FractionalMoment, NoFadingLimit) {
    for (int eta : {3, 4, 6}) {
        for (double pr : {0.5, 1.0, 3.0}) {
            const double v = fractional_moment(FadingModel::nakagami(1e4, pr), eta);
            EXPECT_LT(std::abs(v / std::pow(pr, 2.0 / eta) - 1.0), 1e-3);
        }
    }
}

TEST(KwwScale, RayleighUnitRateScale) {
    const KwwScale sc = kww_scale(NetworkParams(2.0, 4), FadingModel::rayleigh(1.0));
    EXPECT_EQ(sc.beta, Rational(1, 2));
    EXPECT_NEAR(sc.t, std::numbers::pi * std::numbers::pi, 1e-13);
}

TEST(KwwScale, NakagamiEtaThree) {
    const KwwScale sc = kww_scale(NetworkParams(2.0, 3), FadingModel::nakagami(10.0, 1.0));
    const double want = 2.0 * std::numbers::pi * std::tgamma(10.0 + 2.0 / 3.0) /
                        (std::tgamma(10.0) * std::pow(10.0, 2.0 / 3.0)) * std::tgamma(1.0 / 3.0);
    EXPECT_EQ(sc.beta, Rational(2, 3));
    EXPECT_LT(oracle::rel_err(sc.t, want), 1e-13);
}

TEST(KwwScale, LinearInDensity) {
    const FadingModel f = FadingModel::nakagami(3.0, 1.5);
    for (int eta : {3, 5, 7}) {
        const double t1 = kww_scale(NetworkParams(1.0, eta), f).t;
        for (double lambda : {1e-6, 0.3, 7.0}) {
            EXPECT_LT(oracle::rel_err(kww_scale(NetworkParams(lambda, eta), f).t, lambda * t1), 1e-14);
        }
    }
}

TEST(LaplaceTransform, Values) {
    const KwwScale sc = kww_scale(NetworkParams(2.0, 4), FadingModel::rayleigh(1.0));
    EXPECT_EQ(laplace_transform(sc, 0.0), 1.0);
    EXPECT_LT(oracle::rel_err(laplace_transform(sc, 1.0), std::exp(-std::numbers::pi * std::numbers::pi)), 1e-14);
    EXPECT_NEAR(laplace_transform(sc, 1.0), 5.1723e-5, 1e-9);
    EXPECT_THROW(laplace_transform(sc, -1.0), DomainError);
    const KwwScale tiny = kww_scale(NetworkParams(1e-12, 4), FadingModel::rayleigh(1.0));
    for (double s : {0.1, 1.0, 100.0}) {
        EXPECT_NEAR(laplace_transform(tiny, s), 1.0, 1e-9);
    }
}

TEST(LaplaceTransform, MonotoneAndLogLinear) {
    const KwwScale sc(Rational(2, 5), 1.7);
    double prev = 1.0;
    for (double s : oracle::log_grid(1e-3, 1e2, 40)) {
        const double v = laplace_transform(sc, s);
        EXPECT_LT(v, prev);
        EXPECT_NEAR(std::log(v) / std::pow(s, 0.4), -1.7, 1e-13);
        prev = v;
    }
}

TEST(RayleighIdentity, SpecializedFormMatchesGeneric) {
    for (int eta = 3; eta <= 12; ++eta) {
        for (double mu : {0.25, 1.0, 3.0}) {
            for (double lambda : {0.1, 2.0, 10.0}) {
                EXPECT_LT(rayleigh_lt_identity_check(NetworkParams(lambda, eta), mu), 1e-12)
                    << eta << ' ' << mu << ' ' << lambda;
            }
        }
    }
    const NetworkParams net(2.0, 4);
    EXPECT_NEAR(std::log(rayleigh_laplace_transform(net, 1.0, 1.0)), -std::numbers::pi * std::numbers::pi, 1e-12);
    EXPECT_EQ(rayleigh_laplace_transform(net, 1.0, 0.0), 1.0);
}

TEST(FadingModel, DensitiesIntegrateToOne) {
    for (const FadingModel& f : {FadingModel::rayleigh(2.0), FadingModel::nakagami(10.0, 1.0),
                                 FadingModel::nakagami(0.7, 2.0), FadingModel::rician(4.0, 1.0)}) {
        const double hi = f.tail_quantile_bound(1e-14);
        const auto r = quad::integrate([&](double w) { return std::exp(w) * f.pdf(std::exp(w)); }, std::log(1e-40),
                                       std::log(hi), {1e-12, 0.0, 2000, true});
        EXPECT_NEAR(r.value, 1.0, 1e-10) << f.name();
    }
}

TEST(FadingModel, TailBoundHolds) {
    for (const FadingModel& f : {FadingModel::rayleigh(1.0), FadingModel::nakagami(10.0, 1.0),
                                 FadingModel::rician(5.0, 1.0)}) {
        const double x = f.tail_quantile_bound(1e-8);
        const auto r = quad::integrate([&](double w) { return std::exp(w) * f.pdf(std::exp(w)); }, std::log(x),
                                       std::log(50.0 * x), {1e-14, 0.0, 2000, true});
        // exact for Rayleigh, so allow rounding at equality
        EXPECT_LE(r.value, 1e-8 * (1.0 + 1e-9)) << f.name();
    }
}

TEST(FadingModel, SampleMeansMatch) {
    std::mt19937_64 rng(42);
    for (const FadingModel& f : {FadingModel::rayleigh(2.0), FadingModel::nakagami(10.0, 1.0),
                                 FadingModel::rician(3.0, 1.5)}) {
        const int n = 200000;
        double sum = 0.0;
        double sum_p = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = f.sample(rng);
            sum += g;
            sum_p += std::pow(g, 2.0 / 3.0);
        }
        EXPECT_NEAR(sum / n, f.mean_power(), 0.01 * f.mean_power()) << f.name();
        EXPECT_NEAR(sum_p / n, fractional_moment(f, 3), 0.01 * fractional_moment(f, 3)) << f.name();
    }
}
