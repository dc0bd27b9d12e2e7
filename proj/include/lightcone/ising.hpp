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

#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "lightcone/model.hpp"

namespace lightcone::ising {

/// Connected z-z correlation C_ij(t) of the pure Ising chain quenched from
/// the all-down state, evaluated from its closed-form product of cosines.
/// Products run in ascending k so results are bitwise reproducible.
double correlation(const CouplingMatrix &J, std::size_t i, std::size_t j, double t);

/// <sigma_i^z(t)> = -prod_{k != i} cos(2 J_ik t).
double magnetization(const CouplingMatrix &J, std::size_t i, double t);

/// Commuting-Hamiltonian bound on |C_ij(t)|, minimised over the split site
/// k0 in [i, j). Requires i < j.
double commuting_bound(const CouplingMatrix &J, std::size_t i, std::size_t j, double t);

/// Constants of the one-dimensional nearest-neighbour commutator bound
/// ||[A_i(t), B_j]|| <= c ||A|| ||B|| exp((v t - r) / xi).
struct BoundParams {
    double c = 2.0;
    double v = 0.0;
    double xi = 1.0;
    int dimension = 1;

    static BoundParams nearest_neighbor(double J) {
        return {2.0, 6.0 * std::numbers::e * J, 1.0, 1};
    }
    /// Correlation-front speed 2v obtained by holding the bound constant.
    double correlation_velocity() const noexcept { return 2.0 * v; }
};

/// 4c exp((v t - r/2) / xi) = 8 exp(6 e J t - r / 2).
double lr_correlation_bound(double r, double t, double J);

/// Lieb-Robinson correlation velocity 12 e J.
inline double lieb_robinson_velocity(double J) { return 12.0 * std::numbers::e * J; }

struct SupportSets {
    std::vector<std::size_t> lambda_i;
    std::vector<std::size_t> lambda_j;
    bool can_correlate = false;
};

/// Supports of the Heisenberg-evolved sigma^z_i and sigma^z_j under a
/// commuting Hamiltonian. Two sites can correlate only through a direct bond
/// or a single shared neighbour.
SupportSets multi_hop_support(const CouplingMatrix &J, std::size_t i, std::size_t j);

struct Revival {
    double time = 0.0;
    double amplitude = 0.0;
    double prominence = 0.0;
};

struct RevivalOptions {
    double prominence = 0.1;
};

/// Local maxima of |values| inside [window_lo, window_hi] whose topographic
/// prominence reaches the threshold, refined by a three-point quadratic fit.
std::vector<Revival> find_revivals(std::span<const double> times,
                                   std::span<const double> values, double window_lo,
                                   double window_hi, const RevivalOptions &opts = {});

/// Mean of |C_{i,i+1}(t)| over nearest-neighbour pairs.
double mean_nearest_neighbor_correlation(const CouplingMatrix &J, double t);

} // namespace lightcone::ising
