// Copyright 2026 The lightcone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>

#include "lightcone/error.hpp"
#include "lightcone/ising.hpp"

namespace lightcone::ising {

std::vector<Revival> find_revivals(std::span<const double> times,
                                   std::span<const double> values, double window_lo,
                                   double window_hi, const RevivalOptions &opts) {
    require(times.size() == values.size(), ErrorCode::invalid_argument,
            "find_revivals: times and values differ in length");
    require(window_hi > window_lo, ErrorCode::invalid_argument,
            "find_revivals: empty window");
    require(opts.prominence >= 0.0, ErrorCode::invalid_argument,
            "find_revivals: prominence must be >= 0");

    std::size_t lo = 0;
    while (lo < times.size() && times[lo] < window_lo) {
        ++lo;
    }
    std::size_t hi = lo;
    while (hi < times.size() && times[hi] <= window_hi) {
        ++hi;
    }
    require(hi > lo, ErrorCode::invalid_argument,
            "find_revivals: empty window (no samples inside)");
    if (hi - lo >= 3) {
        const double dt = times[lo + 1] - times[lo];
        for (std::size_t k = lo + 1; k < hi; ++k) {
            require(std::abs((times[k] - times[k - 1]) - dt) <= 1e-9 * std::abs(dt),
                    ErrorCode::invalid_argument, "find_revivals: grid is not uniform");
        }
    }

    std::vector<double> a(hi - lo);
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = std::abs(values[lo + k]);
    }

    std::vector<Revival> out;
    for (std::size_t k = 1; k + 1 < a.size(); ++k) {
        if (!(a[k] > a[k - 1] && a[k] >= a[k + 1])) {
            continue;
        }
        double left_min = a[k];
        for (std::size_t m = k; m-- > 0;) {
            if (a[m] > a[k]) {
                break;
            }
            left_min = std::min(left_min, a[m]);
        }
        double right_min = a[k];
        for (std::size_t m = k + 1; m < a.size(); ++m) {
            if (a[m] > a[k]) {
                break;
            }
            right_min = std::min(right_min, a[m]);
        }
        const double prominence = a[k] - std::max(left_min, right_min);
        if (prominence < opts.prominence) {
            continue;
        }

        const double dt = times[lo + k + 1] - times[lo + k];
        const double curvature = a[k - 1] - 2.0 * a[k] + a[k + 1];
        double shift = 0.0;
        if (curvature < 0.0) {
            shift = 0.5 * (a[k - 1] - a[k + 1]) / curvature;
        }
        Revival r;
        r.time = times[lo + k] + shift * dt;
        r.amplitude = a[k] - 0.25 * (a[k - 1] - a[k + 1]) * shift;
        r.prominence = prominence;
        out.push_back(r);
    }
    return out;
}

} // namespace lightcone::ising
