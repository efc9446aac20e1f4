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

// Globally adaptive Gauss-Kronrod quadrature with an absolute tolerance.
// The 21-point Kronrod rule comes from Boost.Math; subdivision always splits
// the interval with the largest error estimate.

#include <cmath>
#include <algorithm>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kwwint/error.hpp"

namespace kwwint::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_intervals = 2000;
    /// Equal panels the interval is cut into before adaptive refinement.
    int initial_panels = 1;
    /// Throw QuadratureError when the budget runs out before the tolerance.
    bool throw_on_failure = true;
};

namespace detail {

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment gk21(const F& f, double a, double b) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err);
    return {a, b, v, err};
}

} // namespace detail

/// Integrate f over the finite interval [a, b].
template <typename F>
QuadResult integrate(const F& f, double a, double b, const QuadOptions& opt = {}) {
    QuadResult out;
    if (a == b) {
        return out;
    }
    std::priority_queue<detail::Segment> heap;
    const int panels = std::max(1, opt.initial_panels);
    double total = 0.0;
    double total_err = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = i == 0 ? a : a + (b - a) * i / panels;
        const double hi = i + 1 == panels ? b : a + (b - a) * (i + 1) / panels;
        const detail::Segment seg = detail::gk21(f, lo, hi);
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }
    int count = panels;
    auto done = [&] {
        return total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    };
    while (!done() && count < opt.max_intervals) {
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst);
            break;
        }
        const detail::Segment left = detail::gk21(f, worst.a, mid);
        const detail::Segment right = detail::gk21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // re-sum to shed the drift of the running updates
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = total_err;
    out.intervals = count;
    if (opt.throw_on_failure && !std::isfinite(total)) {
        throw QuadratureError("integrate: non-finite integrand");
    }
    if (opt.throw_on_failure && total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        std::ostringstream os;
        os << "integrate: tolerance " << opt.abs_tol << " not reached on [" << a << ", " << b
           << "], error estimate " << total_err;
        throw QuadratureError(os.str());
    }
    return out;
}

} // namespace kwwint::quad
