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
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lightcone/ions.hpp"

namespace lightcone {

/// Largest chain for which a full 2^N state vector is allowed.
inline constexpr std::size_t kMaxStateVectorSpins = 24;

/// Symmetric N x N spin-spin coupling matrix with a zero diagonal.
///
/// Couplings are stored in the internal angular convention (hbar = 1,
/// propagator exp(-iHt)), so J_ij * t is the phase that enters the Ising
/// solution's cos[2 (J_ik + J_jk) t] factors. Indices are 0-based.
class CouplingMatrix {
  public:
    CouplingMatrix() = default;

    /// Validates symmetry, a zero diagonal and a nonzero largest coupling.
    static CouplingMatrix from_dense(std::size_t n, std::vector<double> values);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept {
        return values_[i * n_ + j];
    }
    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * n_, n_};
    }
    std::span<const double> values() const noexcept { return values_; }

    /// max_{i<j} |J_ij|
    double max_abs() const noexcept { return max_abs_; }

    CouplingMatrix scaled(double factor) const;

  private:
    CouplingMatrix(std::size_t n, std::vector<double> values, double max_abs)
        : n_(n), values_(std::move(values)), max_abs_(max_abs) {}

    std::size_t n_ = 0;
    std::vector<double> values_;
    double max_abs_ = 0.0;
};

struct PowerLawSource {
    double J0 = 1.0;
    double alpha = 1.0;
};

struct NearestNeighborSource {
    double J = 1.0;
};

struct ExplicitSource {
    std::vector<std::vector<double>> matrix;
};

using CouplingSource =
    std::variant<PowerLawSource, NearestNeighborSource, IonTrapParams, ExplicitSource>;

struct ChainSpec {
    std::size_t n_spins = 0;
    CouplingSource source;
};

/// Builds the coupling matrix of a chain.
CouplingMatrix build_couplings(const ChainSpec &spec);

/// J_ij = J0 / |i - j|^alpha.
CouplingMatrix power_law_couplings(std::size_t n, double J0, double alpha);

/// J_ij = J when |i - j| = 1, zero otherwise.
CouplingMatrix nearest_neighbor_couplings(std::size_t n, double J);

struct PowerLawFit {
    double J0_hat = 0.0;
    double alpha_hat = 0.0;
    double rms_log_residual = 0.0;
};

/// Least-squares fit of log Jbar(r) against log r, where Jbar(r) is the mean
/// coupling over all pairs at separation r. Throws non_positive_coupling when
/// any off-diagonal coupling is <= 0 (the log-log regression is undefined).
PowerLawFit fit_power_law(const CouplingMatrix &J);

/// Mean coupling over pairs at each separation r = 1..N-1 (index r-1).
std::vector<double> separation_means(const CouplingMatrix &J);

/// Row-major CSV with header "i,j,J"; indices are 1-based.
void write_couplings_csv(std::ostream &os, const CouplingMatrix &J);

} // namespace lightcone
