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

#include <cmath>

#include "lightcone/analysis.hpp"
#include "lightcone/error.hpp"

namespace lightcone::analysis {

std::string_view to_string(PairReduce r) noexcept {
    return r == PairReduce::max ? "max" : "mean";
}

std::optional<double> LightConeBoundary::arrival(std::size_t r) const {
    for (const auto &a : arrivals) {
        if (a.r == r) {
            return a.time;
        }
    }
    return std::nullopt;
}

ReducedPoint reduce_pairs(const CorrelationField &field, std::size_t r, std::size_t k,
                          PairReduce reduce) {
    const std::size_t n = field.n_spins();
    require(r >= 1 && r < n, ErrorCode::index_out_of_range, "reduce_pairs: separation out of range");
    require(k < field.n_times(), ErrorCode::index_out_of_range, "reduce_pairs: time index out of range");
    ReducedPoint out;
    if (reduce == PairReduce::max) {
        out.value = -INFINITY;
        for (std::size_t i = 0; i + r < n; ++i) {
            const double c = field(i, i + r, k);
            if (c > out.value) {
                out = {c, i, i + r};
            }
        }
    } else {
        double sum = 0.0;
        for (std::size_t i = 0; i + r < n; ++i) {
            sum += field(i, i + r, k);
        }
        out.value = sum / static_cast<double>(n - r);
    }
    return out;
}

LightConeBoundary extract_light_cone(const CorrelationField &field, double threshold,
                                     PairReduce reduce) {
    require(threshold > 0.0 && std::isfinite(threshold), ErrorCode::invalid_argument,
            "extract_light_cone: threshold must be > 0");
    const auto times = field.times();
    require(times.size() >= 2, ErrorCode::insufficient_data,
            "extract_light_cone: need at least 2 time samples");
    const double dt = times[1] - times[0];
    for (std::size_t k = 1; k < times.size(); ++k) {
        require(std::abs(times[k] - times[k - 1] - dt) <= 1e-9 * std::abs(dt) && dt > 0.0,
                ErrorCode::invalid_argument, "extract_light_cone: time grid is not uniform");
    }

    LightConeBoundary b;
    b.threshold = threshold;
    b.reduce = reduce;
    for (std::size_t r = 1; r < field.n_spins(); ++r) {
        ReducedPoint prev{};
        for (std::size_t k = 0; k < times.size(); ++k) {
            const ReducedPoint cur = reduce_pairs(field, r, k, reduce);
            if (cur.value < threshold) {
                prev = cur;
                continue;
            }
            Arrival a;
            a.r = r;
            if (k == 0) {
                a.time = times[0];
            } else {
                const double frac = (threshold - prev.value) / (cur.value - prev.value);
                a.time = times[k - 1] + frac * (times[k] - times[k - 1]);
            }
            if (reduce == PairReduce::max) {
                a.source_pair = std::make_pair(cur.i, cur.j);
            }
            b.arrivals.push_back(a);
            break;
        }
    }
    return b;
}

} // namespace lightcone::analysis
