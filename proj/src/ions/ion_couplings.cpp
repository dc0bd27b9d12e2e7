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

#include "lightcone/error.hpp"
#include "lightcone/model.hpp"

namespace lightcone {

void validate(const IonTrapParams &p) {
    auto positive = [](double v, const char *name) {
        require(v > 0.0 && std::isfinite(v), ErrorCode::invalid_argument,
                std::string("ion trap parameter '") + name + "' must be positive");
    };
    require(p.n_ions >= 2, ErrorCode::invalid_argument,
            "ion trap parameter 'n_ions' must be >= 2");
    positive(p.axial_freq, "axial_freq");
    positive(p.transverse_freq, "transverse_freq");
    positive(p.rabi_freq, "rabi_freq");
    positive(p.recoil_freq, "recoil_freq");
    positive(p.detuning, "detuning");
    require(p.guard_band >= 0.0, ErrorCode::invalid_argument,
            "ion trap parameter 'guard_band' must be >= 0");
    require(p.transverse_freq > p.axial_freq, ErrorCode::invalid_argument,
            "ion trap parameter 'transverse_freq' must exceed 'axial_freq'");
}

CouplingMatrix ion_couplings(const NormalModes &modes, const IonTrapParams &p) {
    const std::size_t n = modes.n;
    require(n >= 2 && modes.omega.size() == n && modes.b.size() == n * n,
            ErrorCode::invalid_argument, "ion_couplings: malformed normal modes");
    require(p.detuning > 0.0, ErrorCode::invalid_argument,
            "ion_couplings: detuning must be positive");

    std::vector<double> inv(n);
    for (std::size_t m = 0; m < n; ++m) {
        if (std::abs(p.detuning - modes.omega[m]) < p.guard_band) {
            fail(ErrorCode::resonance,
                 "ion_couplings: detuning within guard band of mode " +
                     std::to_string(m + 1));
        }
        inv[m] = 1.0 / (p.detuning * p.detuning - modes.omega[m] * modes.omega[m]);
    }

    const double prefactor = p.rabi_freq * p.rabi_freq * p.recoil_freq;
    std::vector<double> J(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                s += modes(i, m) * modes(j, m) * inv[m];
            }
            J[i * n + j] = prefactor * s;
            J[j * n + i] = prefactor * s;
        }
    }
    return CouplingMatrix::from_dense(n, std::move(J));
}

CouplingMatrix ion_trap_couplings(const IonTrapParams &p) {
    validate(p);
    const EquilibriumPositions pos = equilibrium_positions(p.n_ions);
    const NormalModes modes = transverse_modes(pos, p.anisotropy(), p.axial_freq);
    return ion_couplings(modes, p);
}

} // namespace lightcone
