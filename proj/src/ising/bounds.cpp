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
#include <limits>

#include "lightcone/error.hpp"
#include "lightcone/ising.hpp"

namespace lightcone::ising {

double commuting_bound(const CouplingMatrix &J, std::size_t i, std::size_t j, double t) {
    require(i < j, ErrorCode::invalid_argument, "commuting_bound requires i < j");
    require(j < J.size(), ErrorCode::index_out_of_range,
            "commuting_bound: site out of range");
    require(t >= 0.0 && std::isfinite(t), ErrorCode::invalid_argument,
            "commuting_bound: time must be >= 0");

    // h_kj = h_jk and h_kk = 0, so the sums may run over all k.
    const std::size_t n = J.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k0 = i; k0 < j; ++k0) {
        double outer_i = 0.0;
        for (std::size_t k = k0 + 1; k < n; ++k) {
            outer_i += std::abs(J(i, k));
        }
        double inner_j = 0.0;
        for (std::size_t k = 0; k <= k0; ++k) {
            inner_j += std::abs(J(j, k));
        }
        best = std::min(best, 4.0 * t * (outer_i + inner_j));
    }
    return best;
}

double lr_correlation_bound(double r, double t, double J) {
    require(r >= 1.0, ErrorCode::invalid_argument, "lr_correlation_bound: r must be >= 1");
    require(t >= 0.0 && std::isfinite(t), ErrorCode::invalid_argument,
            "lr_correlation_bound: t must be >= 0");
    require(J >= 0.0 && std::isfinite(J), ErrorCode::invalid_argument,
            "lr_correlation_bound: J must be >= 0");
    const BoundParams p = BoundParams::nearest_neighbor(J);
    return 4.0 * p.c * std::exp((p.v * t - 0.5 * r) / p.xi);
}

} // namespace lightcone::ising
