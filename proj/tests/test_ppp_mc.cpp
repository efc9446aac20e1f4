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

#include <gtest/gtest.h>

#include "kwwint/ppp_mc.hpp"
#include "kwwint/stable_pdf.hpp"

using namespace kwwint;
using namespace kwwint::mc;

namespace {

SimConfig levy_config() {
    SimConfig cfg;
    cfg.net = NetworkParams(2.0, 4);
    cfg.interference_fading = FadingModel::rayleigh(1.0);
    cfg.signal_fading = FadingModel::rayleigh(1.0);
    cfg.trials = 2000;
    cfg.seed = 20260101;
    cfg.threads = 0;
    return cfg;
}

bool same(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].interference != b[i].interference || a[i].signal != b[i].signal || a[i].sinr != b[i].sinr ||
            a[i].interferers != b[i].interferers) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST(SimConfig, Validation) {
    SimConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.trials = 0;
    EXPECT_THROW(cfg.validate(), DomainError);
    cfg = SimConfig{};
    cfg.serving_distance_km = 25.0;
    EXPECT_THROW(cfg.validate(), DomainError);
    cfg = SimConfig{};
    cfg.noise = -1.0;
    EXPECT_THROW(cfg.validate(), DomainError);
    cfg = SimConfig{};
    cfg.window_km = 0.0;
    EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Simulate, EmptyFieldGivesZeroInterference) {
    SimConfig cfg = levy_config();
    cfg.net = NetworkParams(1e-9, 4);
    cfg.trials = 200;
    for (const TrialRecord& r : simulate(cfg)) {
        EXPECT_EQ(r.interference, 0.0);
        EXPECT_TRUE(std::isinf(r.sinr));
    }
}

TEST(Simulate, SinrIsStoredRatio) {
    SimConfig cfg = levy_config();
    cfg.trials = 100;
    cfg.noise = 0.3;
    for (const TrialRecord& r : simulate(cfg)) {
        EXPECT_EQ(r.sinr, r.signal / (r.interference + cfg.noise));
        EXPECT_GT(r.interference, 0.0);
    }
}

TEST(Simulate, DeterministicAcrossRunsAndThreads) {
    SimConfig cfg = levy_config();
    cfg.trials = 300;
    cfg.threads = 1;
    const auto a = simulate(cfg);
    const auto b = simulate(cfg);
    cfg.threads = 4;
    const auto c = simulate(cfg);
    EXPECT_TRUE(same(a, b));
    EXPECT_TRUE(same(a, c));
    cfg.seed += 1;
    EXPECT_FALSE(same(a, simulate(cfg)));
}

TEST(Simulate, MeanCount) {
    const SimConfig cfg = levy_config();
    const auto recs = simulate(cfg);
    double mean = 0.0;
    for (const TrialRecord& r : recs) mean += static_cast<double>(r.interferers);
    mean /= static_cast<double>(recs.size());
    const double want = cfg.net.lambda * cfg.area();
    EXPECT_NEAR(mean, want, 3.0 * std::sqrt(want / cfg.trials));
}

TEST(Simulate, EmpiricalLaplaceTransformOfLevyField) {
    const auto recs = simulate(levy_config());
    const double t = std::numbers::pi * std::numbers::pi;
    for (double s : {0.5, 1.0, 2.0}) {
        const LtEstimate e = empirical_laplace_transform(recs, s);
        const double want = std::exp(-t * std::sqrt(s));
        EXPECT_NEAR(e.value, want, 3.0 * e.std_error) << s;
    }
}

TEST(Simulate, KolmogorovSmirnovAgainstClosedForm) {
    const auto recs = simulate(levy_config());
    const stable::StablePdf d(KwwScale(Rational(1, 2), std::numbers::pi * std::numbers::pi));
    const double ks = empirical_cdf(recs, Field::Interference).ks_statistic([&](double x) { return d.cdf(x); });
    EXPECT_LE(ks, 0.05);
}

TEST(Simulate, TruncationBiasIsSmall) {
    const SimConfig cfg = levy_config();
    const double t = std::numbers::pi * std::numbers::pi;
    // median of the Levy law with scale t: t^2 / (4 erfcinv(1/2)^2)
    const double median = t * t / (4.0 * 0.47693627620446987 * 0.47693627620446987);
    EXPECT_NEAR(stable::StablePdf(KwwScale(Rational(1, 2), t)).cdf(median), 0.5, 1e-12);
    EXPECT_LT(truncation_tail_mean(cfg), 1e-2 * median);
}

TEST(EmpiricalCdf, StepBehaviour) {
    const EmpiricalCdf one(std::vector<double>{2.5});
    EXPECT_EQ(one(2.4999), 0.0);
    EXPECT_EQ(one(2.5), 1.0);
    const EmpiricalCdf many(std::vector<double>{3.0, 1.0, 2.0, 2.0});
    EXPECT_EQ(many(0.5), 0.0);
    EXPECT_EQ(many(1.0), 0.25);
    EXPECT_EQ(many(2.0), 0.75);
    EXPECT_EQ(many(10.0), 1.0);
    EXPECT_THROW(EmpiricalCdf(std::vector<double>{}), DomainError);
    EXPECT_NEAR(many.ks_statistic([](double) { return 0.5; }), 0.5, 1e-15);
}

TEST(EmpiricalCoverage, LimitsAndMonotone) {
    SimConfig cfg = levy_config();
    cfg.trials = 500;
    const auto recs = simulate(cfg);
    const auto cov = empirical_coverage(recs, {1e-12, 0.1, 1.0, 10.0, 100.0, 1e12});
    EXPECT_EQ(cov.front(), 1.0);
    EXPECT_EQ(cov.back(), 0.0);
    for (std::size_t i = 1; i < cov.size(); ++i) {
        EXPECT_LE(cov[i], cov[i - 1]);
    }
    EXPECT_THROW(empirical_coverage(recs, {}), DomainError);
}
