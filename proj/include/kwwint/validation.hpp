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

// Invariant suite behind `kwwint validate`: every check reports the measured
// worst-case error next to the tolerance it is held to.

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kwwint/coverage.hpp"
#include "kwwint/interference.hpp"
#include "kwwint/stable_pdf.hpp"
#include "kwwint/talbot.hpp"

namespace kwwint::validation {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct ValidationOptions {
    /// Reduced grids.
    bool quick = false;
    /// Restrict the per-beta checks to one value.
    std::optional<Rational> beta;
    /// Run only the composition check (for `beta`, default 1/4).
    bool composition_only = false;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out.push_back(std::exp(a + (b - a) * i / (n - 1)));
    }
    return out;
}

inline CheckResult make(std::string name, double measured, double tol) {
    const bool ok = measured <= tol;
    return {std::move(name), measured, tol, ok};
}

inline std::string tag(const Rational& beta) { return "[beta=" + beta.str() + "]"; }

inline CheckResult normalization(const Rational& beta) {
    const stable::StablePdf d = stable::StablePdf::best_available(KwwScale(beta, 1.0));
    return make("normalization " + tag(beta), std::abs(stable::normalization(d) - 1.0), 1e-6);
}

// Largest negative excursion of the density (0 when none).
inline CheckResult non_negative(const Rational& beta, int points) {
    const stable::StablePdf d = stable::StablePdf::best_available(KwwScale(beta, 1.0));
    double worst = 0.0;
    for (double x : log_grid(stable::left_tail_cutoff(beta), 1e4, points)) {
        worst = std::max(worst, -d.evaluate_standard(x).value);
    }
    return make("non-negative pdf " + tag(beta), worst, 0.0);
}

// Largest decrease between consecutive CDF values.
inline CheckResult monotone_cdf(const Rational& beta, int points) {
    const stable::StablePdf d = stable::StablePdf::best_available(KwwScale(beta, 1.0));
    double worst = 0.0;
    double prev = 0.0;
    for (double x : log_grid(1e-3, 1e3, points)) {
        const double c = d.cdf_standard(x);
        worst = std::max(worst, prev - c);
        prev = c;
    }
    return make("monotone cdf " + tag(beta), worst, 0.0);
}

inline CheckResult lt_round_trip(const Rational& beta) {
    const KwwScale scale(beta, 1.0);
    const stable::StablePdf d = stable::StablePdf::best_available(scale);
    double worst = 0.0;
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        worst = std::max(worst, std::abs(stable::numerical_laplace_transform(d, s) - laplace_transform(scale, s)));
    }
    return make("laplace round-trip " + tag(beta), worst, 1e-6);
}

inline CheckResult talbot_agreement(const Rational& beta, int points) {
    const stable::StablePdf closed(KwwScale(beta, 1.0));
    const stable::StablePdf talbot(KwwScale(beta, 1.0), stable::Backend::Talbot);
    double worst = 0.0;
    for (double x : log_grid(0.05, 50.0, points)) {
        worst = std::max(worst, std::abs(closed.evaluate_standard(x).value - talbot.evaluate_standard(x).value));
    }
    return make("closed form vs talbot " + tag(beta), worst, 1e-6);
}

inline CheckResult composition(const Rational& beta, int points) {
    const auto factors = stable::StablePdf::find_factors(beta);
    if (!factors) {
        throw DomainError("validate: beta = " + beta.str() + " is not a product of two closed-form values");
    }
    const stable::StablePdf direct = stable::StablePdf::best_available(KwwScale(beta, 1.0));
    const stable::StablePdf composed = stable::StablePdf::composition(1.0, factors->first, factors->second);
    double worst = 0.0;
    for (double x : log_grid(0.05, 20.0, points)) {
        worst = std::max(worst, std::abs(composed.pdf(x) - direct.pdf(x)));
    }
    return make("composition " + factors->first.str() + " x " + factors->second.str() + " " + tag(beta), worst,
                1e-4);
}

inline CheckResult rayleigh_identity() {
    double worst = 0.0;
    for (int eta = 3; eta <= 8; ++eta) {
        for (double lambda : {0.1, 2.0, 10.0}) {
            for (double mu : {0.5, 1.0, 3.0}) {
                worst = std::max(worst, rayleigh_lt_identity_check(NetworkParams(lambda, eta), mu));
            }
        }
    }
    return make("rayleigh transform identity", worst, 1e-12);
}

inline CheckResult nakagami_unit_is_rayleigh() {
    double worst = 0.0;
    for (int eta = 3; eta <= 8; ++eta) {
        for (double pr : {0.5, 1.0, 2.0}) {
            const NetworkParams net(2.0, eta);
            const double a = kww_scale(net, FadingModel::nakagami(1.0, pr)).t;
            const double b = kww_scale(net, FadingModel::rayleigh(1.0 / pr)).t;
            worst = std::max(worst, std::abs(a / b - 1.0));
        }
    }
    return make("nakagami m=1 equals rayleigh", worst, 1e-12);
}

inline CheckResult nakagami_no_fading_limit() {
    double worst = 0.0;
    for (int eta = 3; eta <= 8; ++eta) {
        for (double pr : {0.5, 1.0, 2.0}) {
            const double moment = fractional_moment(FadingModel::nakagami(1e4, pr), eta);
            worst = std::max(worst, std::abs(moment / std::pow(pr, 2.0 / eta) - 1.0));
        }
    }
    return make("nakagami m->inf no-fading limit", worst, 1e-3);
}

// Largest increase of p_c along T and along sigma^2 in {0, 0.1, 1}.
inline CheckResult coverage_monotone(bool quick) {
    const FadingModel ray = FadingModel::rayleigh(1.0);
    const FadingModel nak = FadingModel::nakagami(10.0, 1.0);
    std::vector<double> grid;
    const int n = quick ? 11 : 31;
    for (int i = 0; i < n; ++i) {
        grid.push_back(db_to_linear(-10.0 + 30.0 * i / (n - 1)));
    }
    std::vector<std::pair<FadingModel, FadingModel>> pairs = {{nak, ray}, {ray, nak}};
    if (!quick) {
        pairs.emplace_back(nak, nak);
        pairs.emplace_back(ray, ray);
    }
    double worst = 0.0;
    for (int eta : {3, 6}) {
        for (const auto& [signal, interference] : pairs) {
            std::vector<double> prev;
            for (double noise : {0.0, 0.1, 1.0}) {
                CoverageScenario sc;
                sc.net = NetworkParams(2.0, eta);
                sc.signal_fading = signal;
                sc.interference_fading = interference;
                sc.noise = noise;
                sc.thresholds = grid;
                const auto pc = coverage_analytic(sc);
                for (std::size_t k = 1; k < pc.size(); ++k) {
                    worst = std::max(worst, pc[k] - pc[k - 1]);
                }
                for (std::size_t k = 0; k < prev.size(); ++k) {
                    worst = std::max(worst, pc[k] - prev[k]);
                }
                prev = pc;
            }
        }
    }
    return make("coverage monotone in T and noise", worst, 1e-12);
}

} // namespace detail

/// Run the suite. Throws DomainError for an unusable option combination.
inline ValidationReport run_validation(const ValidationOptions& opt = {}) {
    ValidationReport report;
    auto& out = report.checks;
    if (opt.composition_only) {
        out.push_back(detail::composition(opt.beta.value_or(Rational{1, 4}), opt.quick ? 40 : 200));
        return report;
    }
    std::vector<Rational> betas;
    if (opt.beta) {
        KwwScale(*opt.beta, 1.0);
        betas.push_back(*opt.beta);
    } else {
        betas.assign(stable::closed_form_betas().begin(), stable::closed_form_betas().end());
    }
    const int points = opt.quick ? 40 : 200;
    for (const Rational& b : betas) {
        out.push_back(detail::normalization(b));
        out.push_back(detail::non_negative(b, opt.quick ? 200 : 1000));
        out.push_back(detail::monotone_cdf(b, opt.quick ? 30 : 100));
        out.push_back(detail::lt_round_trip(b));
        if (stable::has_closed_form(b)) {
            out.push_back(detail::talbot_agreement(b, points));
        }
    }
    const Rational comp = opt.beta && stable::StablePdf::find_factors(*opt.beta) ? *opt.beta : Rational{1, 4};
    out.push_back(detail::composition(comp, opt.quick ? 40 : 200));
    out.push_back(detail::rayleigh_identity());
    out.push_back(detail::nakagami_unit_is_rayleigh());
    out.push_back(detail::nakagami_no_fading_limit());
    out.push_back(detail::coverage_monotone(opt.quick));
    return report;
}

inline std::ostream& operator<<(std::ostream& os, const CheckResult& c) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << c.measured << "  tol=" << c.tolerance;
    return os;
}

inline std::ostream& operator<<(std::ostream& os, const ValidationReport& r) {
    for (const auto& c : r.checks) {
        os << c << '\n';
    }
    os << (r.passed() ? "all checks passed" : "validation FAILED") << '\n';
    return os;
}

} // namespace kwwint::validation
