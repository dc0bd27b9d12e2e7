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
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lightcone/evolution.hpp"

namespace lightcone::analysis {

/// How correlations of all pairs at one separation are combined.
enum class PairReduce { max, mean };

std::string_view to_string(PairReduce r) noexcept;

/// Reduced series C(r, t_k) over pairs i < j with j - i = r, r = 1..N-1.
/// Returns the value and, for `max`, the realising pair.
struct ReducedPoint {
    double value = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
};
ReducedPoint reduce_pairs(const CorrelationField &field, std::size_t r, std::size_t k,
                          PairReduce reduce);

struct Arrival {
    std::size_t r = 0;  // separation
    double time = 0.0;  // first crossing of the contour
    std::optional<std::pair<std::size_t, std::size_t>> source_pair; // 0-based
};

struct LightConeBoundary {
    double threshold = 0.0;
    PairReduce reduce = PairReduce::max;
    std::vector<Arrival> arrivals; // ascending r; separations never crossed are absent

    bool empty() const noexcept { return arrivals.empty(); }
    std::optional<double> arrival(std::size_t r) const;
};

/// First time the pair-reduced correlation at each separation reaches the
/// threshold, linearly interpolated between grid samples. A sample exactly
/// on the threshold counts as the crossing.
LightConeBoundary extract_light_cone(const CorrelationField &field, double threshold,
                                     PairReduce reduce = PairReduce::max);

enum class FitForm { power_law, exponential, linear };

std::string_view to_string(FitForm f) noexcept;

struct FitResult {
    FitForm form = FitForm::linear;
    /// power_law: {a, beta}, y = a x^beta
    /// exponential: {A, xi}, y = A exp(-x / xi)
    /// linear: {slope, intercept}
    std::vector<double> params;
    std::vector<double> sigmas;
    double rms_residual = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::size_t n_points = 0;
};

/// Least-squares fit of log t* = log a + beta log r. beta < 1 signals a
/// cone that widens faster than linearly. Optional weights apply to the
/// log-space residuals.
FitResult fit_boundary_power_law(const LightConeBoundary &b,
                                 std::span<const double> weights = {});

struct VelocityCurve {
    std::vector<double> r;
    std::vector<double> v;
    double v_lr = 0.0;
};

/// v(r) = dr/dt* = r^(1 - beta) / (a beta) along a fitted power-law boundary,
/// with the nearest-neighbour Lieb-Robinson velocity 12 e J_max attached.
VelocityCurve propagation_velocity(const FitResult &fit, std::span<const double> r,
                                   double j_max);
VelocityCurve propagation_velocity(const FitResult &fit, const LightConeBoundary &b,
                                   double j_max);

/// Pair-reduced correlation at time t (linear interpolation in time) for the
/// separations still outside the boundary (t < t*(r), or never crossed).
struct DecayProfile {
    std::vector<double> r;
    std::vector<double> c;
};
DecayProfile outside_cone_profile(const CorrelationField &field, double t,
                                  const LightConeBoundary &boundary);

/// C(r) = A exp(-r / xi) over the outside-cone region.
FitResult fit_spatial_decay(const CorrelationField &field, double t,
                            const LightConeBoundary &boundary);

/// C(r) = A r^-p over the same region; params are {A, p}. Used to compare
/// decay forms.
FitResult fit_spatial_power_law(const CorrelationField &field, double t,
                                const LightConeBoundary &boundary);

/// Exponential / power-law fits of an explicit profile.
FitResult fit_exponential(std::span<const double> x, std::span<const double> y);
FitResult fit_power_decay(std::span<const double> x, std::span<const double> y);

/// Second-order short-time XY correlation (J_ij t)^2.
double perturbative_xy(const CouplingMatrix &J, std::size_t i, std::size_t j, double t);

void write_boundary_csv(std::ostream &os, const LightConeBoundary &b);
void write_velocity_csv(std::ostream &os, const VelocityCurve &v);

} // namespace lightcone::analysis
