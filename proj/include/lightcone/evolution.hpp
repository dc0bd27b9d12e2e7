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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "lightcone/kernels.hpp"
#include "lightcone/model.hpp"

namespace lightcone {

using cplx = std::complex<double>;

enum class SpinModel { ising, xy, ising_field };

std::string_view to_string(SpinModel model) noexcept;

/// Matrix-free spin-chain Hamiltonian on 2^N amplitudes.
///
/// Basis index bit i encodes spin i (0 = down, 1 = up along z). The
/// sigma^x sigma^x part is diagonal after a Walsh-Hadamard transform, and
/// the sigma^z sigma^z part is diagonal in the computational basis, so
///   H psi = D_z psi + W D_x W psi  (+ B sum_i sigma^y_i psi)
/// with W the unnormalised Hadamard transform and D_x pre-divided by 2^N.
class Hamiltonian {
  public:
    Hamiltonian(CouplingMatrix J, SpinModel model, double field = 0.0,
                const kernels::KernelTable *table = nullptr);

    SpinModel model() const noexcept { return model_; }
    const CouplingMatrix &couplings() const noexcept { return J_; }
    double field() const noexcept { return field_; }
    std::size_t n_spins() const noexcept { return J_.size(); }
    std::size_t dimension() const noexcept { return std::size_t{1} << J_.size(); }
    const kernels::KernelTable &kernels() const noexcept { return *table_; }

    /// out = H in. `scratch` must have dimension() entries; in and out must not alias.
    void apply(std::span<const cplx> in, std::span<cplx> out, std::span<cplx> scratch) const;
    void apply(std::span<const cplx> in, std::span<cplx> out) const;

    /// Guaranteed enclosure [E_min, E_max] of the spectrum.
    std::pair<double, double> spectral_bounds() const noexcept { return bounds_; }

    /// Eigenvalues of the sigma^x sigma^x part indexed by Hadamard-basis
    /// state (bit = 0 means sigma^x = +1).
    std::span<const double> x_energies() const noexcept { return x_energy_; }

  private:
    CouplingMatrix J_;
    SpinModel model_;
    double field_;
    const kernels::KernelTable *table_;
    std::vector<double> x_energy_;
    std::vector<double> x_diag_scaled_;
    std::vector<double> z_diag_;
    std::pair<double, double> bounds_;
};

/// Validates the model/field combination (B must be zero unless the model
/// is ising_field) and the state-vector memory cap.
Hamiltonian build_hamiltonian(const CouplingMatrix &J, SpinModel model, double field = 0.0);

/// E[s] = sum_{i<j} c_ij s_i s_j with s_i = +1 for bit 0, -1 for bit 1.
std::vector<double> pair_energies(const CouplingMatrix &c, double scale = 1.0);

/// Unnormalised in-place Walsh-Hadamard transform over all log2(len) bits.
void walsh_hadamard(std::span<cplx> data, const kernels::KernelTable &table);

/// Basis state |down...down>.
std::vector<cplx> all_down_state(std::size_t n_spins);

enum class PropagationMethod {
    automatic, // exact Hadamard-basis phases for pure Ising, Chebyshev otherwise
    chebyshev,
    diagonal,
};

struct EvolveOptions {
    PropagationMethod method = PropagationMethod::automatic;
    /// Chebyshev series is truncated once Bessel coefficients drop below this.
    double truncation = 1e-15;
    /// Allowed deviation of any snapshot norm from 1.
    double norm_tolerance = 1e-9;
    /// Upper limit on working memory; bounds how many snapshots share one
    /// Chebyshev expansion.
    std::size_t memory_budget_bytes = std::size_t{1} << 30;
    std::size_t max_snapshots_per_expansion = 8;
    /// Limit on the whole in-memory trajectory returned by evolve().
    std::size_t max_trajectory_bytes = std::size_t{2} << 30;
};

using SnapshotCallback =
    std::function<void(std::size_t index, double time, std::span<const cplx> psi)>;

/// Propagates |down...down> to every time in `times` (increasing, starting
/// at 0) and hands each snapshot to `on_snapshot` in order. Only a bounded
/// number of state vectors is held at once.
void evolve_streaming(const Hamiltonian &H, std::span<const double> times,
                      const SnapshotCallback &on_snapshot, const EvolveOptions &opts = {});

struct StateTrajectory {
    std::size_t n_spins = 0;
    std::vector<double> times;
    std::vector<std::vector<cplx>> states;
    std::vector<double> norms;
};

StateTrajectory evolve(const Hamiltonian &H, std::span<const double> times,
                       const EvolveOptions &opts = {});

/// Uniform grid of n points on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t n_points);

/// C[i][j] per time, with optional standard errors. Layout is [k][i][j].
class CorrelationField {
  public:
    CorrelationField() = default;
    CorrelationField(std::size_t n_spins, std::vector<double> times, bool with_stderr = false);

    std::size_t n_spins() const noexcept { return n_; }
    std::size_t n_times() const noexcept { return times_.size(); }
    std::span<const double> times() const noexcept { return times_; }
    bool has_stderr() const noexcept { return !stderr_.empty(); }

    double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return values_[index(i, j, k)];
    }
    double stderr_at(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return stderr_[index(i, j, k)];
    }
    void set(std::size_t i, std::size_t j, std::size_t k, double value) noexcept {
        values_[index(i, j, k)] = value;
    }
    void set_stderr(std::size_t i, std::size_t j, std::size_t k, double value) noexcept {
        stderr_[index(i, j, k)] = value;
    }
    /// Writes the full n x n matrix for time index k.
    void set_slice(std::size_t k, std::span<const double> matrix);

  private:
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return (k * n_ + i) * n_ + j;
    }

    std::size_t n_ = 0;
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> stderr_;
};

/// Up-spin marginals P(n_i = 1) and pair marginals P(n_i = n_j = 1) of a
/// z-basis distribution over 2^N outcomes.
struct ZMoments {
    std::size_t n = 0;
    std::vector<double> up;
    std::vector<double> pair; // row-major n x n, diagonal = up
};

ZMoments z_moments(std::span<const double> probabilities, std::size_t n_spins);

/// <sigma^z_i sigma^z_j> - <sigma^z_i><sigma^z_j> as an n x n matrix,
/// computed as 4 (P_ij - P_i P_j).
std::vector<double> connected_zz(const ZMoments &m);

std::vector<double> correlation_matrix(std::span<const cplx> psi, std::size_t n_spins,
                                       const kernels::KernelTable &table = kernels::active());

/// <sigma^z_i> for every spin.
std::vector<double> magnetizations(std::span<const cplx> psi, std::size_t n_spins,
                                   const kernels::KernelTable &table = kernels::active());

CorrelationField connected_correlations(const StateTrajectory &traj);

/// Evolves and reduces each snapshot to correlations without storing states.
CorrelationField correlation_field(const Hamiltonian &H, std::span<const double> times,
                                   const EvolveOptions &opts = {});

/// Closed-form Ising correlations on a time grid.
CorrelationField ising_correlation_field(const CouplingMatrix &J,
                                         std::span<const double> times);

/// <psi|H|psi> (real part).
double energy(const Hamiltonian &H, std::span<const cplx> psi);

/// z-basis measurement record. outcomes[k * n_shots + s] is the basis index
/// (bit i = spin i up) drawn in shot s at time index k.
struct ShotRecord {
    std::size_t n_spins = 0;
    std::size_t n_shots = 0;
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<std::uint32_t> outcomes;

    std::uint32_t outcome(std::size_t k, std::size_t shot) const noexcept {
        return outcomes[k * n_shots + shot];
    }
};

/// Deterministic sampler: std::mt19937_64 seeded with `seed`, uniforms formed
/// as (x >> 11) * 2^-53, inverse-CDF lookup per shot, times in order.
class ShotSampler {
  public:
    ShotSampler(std::size_t n_spins, std::size_t n_shots, std::uint64_t seed);

    /// Draws n_shots outcomes for one snapshot and appends them to the record.
    void sample(double time, std::span<const cplx> psi,
                const kernels::KernelTable &table = kernels::active());
    const ShotRecord &record() const noexcept { return record_; }
    ShotRecord take() noexcept { return std::move(record_); }

  private:
    ShotRecord record_;
    std::mt19937_64 rng_;
    std::vector<double> probs_;
    std::vector<double> cdf_;
};

ShotRecord sample_measurements(const StateTrajectory &traj, std::size_t n_shots,
                               std::uint64_t seed);

/// Plug-in estimator of C_ij with leave-one-out jackknife standard errors.
CorrelationField correlations_from_shots(const ShotRecord &shots);

/// Binary trajectory: "LCTRAJ\0\0", u32 version (1), u32 N, u64 n_times,
/// n_times f64 times, then per time 2^N (re, im) f64 pairs. Little-endian.
void write_trajectory(std::ostream &os, const StateTrajectory &traj);
StateTrajectory read_trajectory(std::istream &is);

/// CSV "t,i,j,C,stderr" over pairs i < j (1-based); stderr empty when absent.
void write_correlations_csv(std::ostream &os, const CorrelationField &field);

} // namespace lightcone
