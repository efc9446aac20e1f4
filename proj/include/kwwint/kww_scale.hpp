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

#include <cmath>
#include <compare>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "kwwint/error.hpp"

namespace kwwint {

/// Positive rational number in lowest terms.
class Rational {
public:
    constexpr Rational() = default;
    Rational(int num, int den) {
        if (den == 0) {
            throw DomainError("Rational: zero denominator");
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const int g = std::gcd(num, den);
        num_ = num / (g == 0 ? 1 : g);
        den_ = den / (g == 0 ? 1 : g);
    }

    /// Parse "p/q" or an integer.
    static Rational parse(const std::string& text) {
        const auto slash = text.find('/');
        try {
            std::size_t used = 0;
            if (slash == std::string::npos) {
                const int v = std::stoi(text, &used);
                if (used != text.size()) {
                    throw DomainError("");
                }
                return {v, 1};
            }
            const std::string a = text.substr(0, slash);
            const std::string b = text.substr(slash + 1);
            std::size_t ua = 0;
            std::size_t ub = 0;
            const int p = std::stoi(a, &ua);
            const int q = std::stoi(b, &ub);
            if (ua != a.size() || ub != b.size()) {
                throw DomainError("");
            }
            return {p, q};
        } catch (const std::exception&) {
            throw DomainError("Rational: cannot parse '" + text + "'");
        }
    }

    constexpr int num() const { return num_; }
    constexpr int den() const { return den_; }
    constexpr double value() const { return static_cast<double>(num_) / den_; }

    friend constexpr bool operator==(const Rational&, const Rational&) = default;
    friend Rational operator*(const Rational& a, const Rational& b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }

    std::string str() const {
        std::ostringstream os;
        os << num_ << '/' << den_;
        return os.str();
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    int num_ = 0;
    int den_ = 1;
};

/// The stretched-exponential Laplace transform exp(-t s^beta).
struct KwwScale {
    Rational beta;
    double t = 1.0;

    KwwScale() = default;
    KwwScale(Rational b, double scale) : beta(b), t(scale) {
        if (!(beta.num() > 0 && beta.num() < beta.den())) {
            throw DomainError("KwwScale: beta must lie in (0, 1), got " + beta.str());
        }
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw DomainError("KwwScale: t must be a finite value > 0");
        }
    }

    /// t^{1/beta}: the density of I is t^{-1/beta} f_beta(I t^{-1/beta}).
    double unit() const { return std::pow(t, 1.0 / beta.value()); }
};

} // namespace kwwint
