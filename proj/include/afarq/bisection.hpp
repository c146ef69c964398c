// SPDX-License-Identifier: Apache-2.0
//
// afarq: optimal power allocation for amplify-and-forward Type-I ARQ
// Copyright (C) 2026 afarq contributors
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
#include <optional>
#include <utility>

namespace afarq {

struct BisectionResult {
    double root = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Root of a strictly decreasing scalar map `f` on a positive bracket,
/// bisecting on the geometric midpoint. Requires f(lo) > target > f(hi).
/// Stops once hi / lo - 1 <= rel_tol.
template <class F>
BisectionResult bisect_decreasing_geometric(F&& f, double target, double lo, double hi,
                                            double rel_tol, int max_iters) {
    BisectionResult r;
    while (hi / lo - 1.0 > rel_tol) {
        if (r.iterations >= max_iters) {
            r.root = std::sqrt(lo * hi);
            return r;
        }
        const double mid = std::sqrt(lo * hi);
        if (f(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++r.iterations;
    }
    r.root = std::sqrt(lo * hi);
    r.converged = true;
    return r;
}

/// Widens [lo, hi] geometrically by `factor` per side until
/// f(lo) > target > f(hi), for a decreasing `f`. Gives up after
/// `max_expansions` widenings.
template <class F>
std::optional<std::pair<double, double>> bracket_decreasing(F&& f, double target, double lo,
                                                            double hi, double factor,
                                                            int max_expansions) {
    for (int i = 0; i <= max_expansions; ++i) {
        const bool lo_ok = f(lo) > target;
        const bool hi_ok = f(hi) < target;
        if (lo_ok && hi_ok) return std::make_pair(lo, hi);
        if (!lo_ok) lo /= factor;
        if (!hi_ok) hi *= factor;
        if (!(lo > 0.0) || !std::isfinite(hi)) break;
    }
    return std::nullopt;
}

}  // namespace afarq
