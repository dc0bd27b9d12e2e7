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
#include <numbers>
#include <vector>

namespace lightcone {

class CouplingMatrix;

/// Trap and laser parameters for a linear ion chain. All frequencies are
/// angular (rad per unit time); cyclic inputs are converted once at the
/// configuration boundary.
struct IonTrapParams {
    std::size_t n_ions = 0;
    double axial_freq = 0.0;      // omega_z
    double transverse_freq = 0.0; // omega_x, the centre-of-mass transverse mode
    double rabi_freq = 0.0;       // Omega
    double recoil_freq = 0.0;     // omega_R = hbar dk^2 / 2M
    double detuning = 0.0;        // mu
    /// Minimum allowed |mu - omega_m|. Default is 100 Hz expressed as an
    /// angular frequency.
    double guard_band = 2.0 * std::numbers::pi * 100.0;

    double anisotropy() const noexcept { return transverse_freq / axial_freq; }
};

/// Throws invalid_argument naming the first offending field.
void validate(const IonTrapParams &p);

/// Dimensionless axial positions in units of l = (e^2 / 4 pi eps0 M omega_z^2)^(1/3).
struct EquilibriumPositions {
    std::vector<double> u;
};

struct EquilibriumOptions {
    int max_iterations = 200;
    double gradient_tolerance = 1e-12;
};

/// Stationary point of V(u) = sum_i u_i^2 / 2 + sum_{i<j} 1 / |u_i - u_j|.
EquilibriumPositions equilibrium_positions(std::size_t n,
                                           const EquilibriumOptions &opts = {});

/// Gradient of the axial potential at u.
std::vector<double> axial_gradient(const std::vector<double> &u);

/// Row-major Hessian of the axial potential at u.
std::vector<double> axial_hessian(const std::vector<double> &u);

struct NormalModes {
    std::size_t n = 0;
    /// Row-major mode matrix, b[i * n + m] = b_{i,m}; columns are modes.
    std::vector<double> b;
    /// Mode frequencies, descending; omega[0] is the centre-of-mass mode.
    std::vector<double> omega;

    double operator()(std::size_t ion, std::size_t mode) const noexcept {
        return b[ion * n + mode];
    }
};

/// Transverse modes of the chain. Frequencies are returned in the units of
/// axial_freq (the default of 1 leaves them in units of omega_z). Each
/// eigenvector is signed so its first non-negligible component is positive.
NormalModes transverse_modes(const EquilibriumPositions &pos, double anisotropy,
                             double axial_freq = 1.0);

/// J_ij = Omega^2 omega_R sum_m b_im b_jm / (mu^2 - omega_m^2).
CouplingMatrix ion_couplings(const NormalModes &modes, const IonTrapParams &p);

/// Positions, modes and couplings from trap parameters in one call.
CouplingMatrix ion_trap_couplings(const IonTrapParams &p);

void write_positions_csv(std::ostream &os, const EquilibriumPositions &pos);
void write_modes_csv(std::ostream &os, const NormalModes &modes);

} // namespace lightcone
