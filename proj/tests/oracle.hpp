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

// Independent high-precision oracles used only by the tests.

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using mp120 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>>;

/// pFq by direct summation in `Real`, until terms drop below 1e-60 of the sum.
template <typename Real = mp50>
Real hyp_series(const std::vector<Real>& a, const std::vector<Real>& b, const Real& z, int max_terms = 4000) {
    Real term = 1;
    Real sum = 1;
    const Real tiny = Real(1e-60);
    for (int n = 0; n < max_terms; ++n) {
        Real ratio = z / (n + 1);
        for (const Real& ai : a) {
            ratio *= ai + n;
        }
        for (const Real& bj : b) {
            ratio /= bj + n;
        }
        term *= ratio;
        sum += term;
        if (term == 0 || (abs(ratio) < 1 && abs(term) < tiny * abs(sum))) {
            break;
        }
    }
    return sum;
}

/// Density of the unit-scale one-sided stable law with beta = p/q from its
/// convergent power series in x^{-beta}, summed with 120 decimal digits.
/// Gamma(k beta + 1) is advanced by Gamma(z + p) = (z)_p Gamma(z).
inline double stable_series_pdf(int p, int q, double x_d) {
    const mp120 beta = mp120(p) / q;
    const mp120 x = mp120(x_d);
    const mp120 pi = boost::math::constants::pi<mp120>();
    const mp120 x_pow = pow(x, -beta);
    std::vector<mp120> gam;
    gam.push_back(mp120(1));
    mp120 sum = 0;
    mp120 max_term = 0;
    mp120 fact = 1;
    mp120 power = 1;
    for (int k = 1; k < 5000; ++k) {
        const mp120 kb = beta * k;
        if (k < q) {
            gam.push_back(boost::math::tgamma(kb + 1));
        } else {
            mp120 g = gam[static_cast<std::size_t>(k - q)];
            const mp120 z = beta * (k - q) + 1;
            for (int j = 0; j < p; ++j) {
                g *= z + j;
            }
            gam.push_back(g);
        }
        fact *= k;
        power *= x_pow;
        const mp120 mag = gam.back() / fact * power;
        const mp120 term = ((k % 2 == 1) ? 1 : -1) * mag * sin(pi * kb);
        sum += term;
        max_term = std::max(max_term, mag);
        if (k > 10 && mag < mp120(1e-40) * max_term && mag < mp120(1e-80)) {
            break;
        }
    }
    return static_cast<double>(sum / (pi * x));
}

/// Deterministic random draws for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
    }

private:
    std::mt19937_64 rng_;
};

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) {
        g.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)));
    }
    return g;
}

} // namespace oracle
