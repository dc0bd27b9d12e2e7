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
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lightcone/error.hpp"
#include "lightcone/ions.hpp"

namespace lightcone {

NormalModes transverse_modes(const EquilibriumPositions &pos, double anisotropy,
                             double axial_freq) {
    const std::size_t n = pos.u.size();
    require(n >= 2, ErrorCode::invalid_argument, "transverse_modes: need >= 2 ions");
    require(anisotropy > 0.0 && std::isfinite(anisotropy), ErrorCode::invalid_argument,
            "transverse_modes: anisotropy must be positive");
    require(axial_freq > 0.0, ErrorCode::invalid_argument,
            "transverse_modes: axial_freq must be positive");

    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd A(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        double coulomb = 0.0;
        for (Eigen::Index j = 0; j < N; ++j) {
            if (i == j) {
                continue;
            }
            const double c = 1.0 / std::pow(std::abs(pos.u[i] - pos.u[j]), 3);
            A(i, j) = c;
            coulomb += c;
        }
        A(i, i) = anisotropy * anisotropy - coulomb;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    require(solver.info() == Eigen::Success, ErrorCode::non_convergence,
            "transverse_modes: eigendecomposition failed");

    NormalModes modes;
    modes.n = n;
    modes.b.assign(n * n, 0.0);
    modes.omega.resize(n);
    // Eigen returns ascending eigenvalues; modes are stored descending.
    for (std::size_t m = 0; m < n; ++m) {
        const Eigen::Index src = N - 1 - static_cast<Eigen::Index>(m);
        const double lambda = solver.eigenvalues()[src];
        if (!(lambda > 0.0)) {
            fail(ErrorCode::zigzag_instability,
                 "transverse_modes: eigenvalue " + std::to_string(lambda) +
                     " <= 0; the linear chain is unstable at this anisotropy");
        }
        modes.omega[m] = axial_freq * std::sqrt(lambda);

        Eigen::VectorXd v = solver.eigenvectors().col(src);
        for (Eigen::Index i = 0; i < N; ++i) {
            if (std::abs(v[i]) > 1e-10) {
                if (v[i] < 0.0) {
                    v = -v;
                }
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            modes.b[i * n + m] = v[static_cast<Eigen::Index>(i)];
        }
    }
    return modes;
}

void write_positions_csv(std::ostream &os, const EquilibriumPositions &pos) {
    std::ostringstream buf;
    buf << std::setprecision(17) << "ion,u\n";
    for (std::size_t i = 0; i < pos.u.size(); ++i) {
        buf << i + 1 << ',' << pos.u[i] << '\n';
    }
    os << buf.str();
}

void write_modes_csv(std::ostream &os, const NormalModes &modes) {
    std::ostringstream buf;
    buf << std::setprecision(17) << "mode,omega,ion,b\n";
    for (std::size_t m = 0; m < modes.n; ++m) {
        for (std::size_t i = 0; i < modes.n; ++i) {
            buf << m + 1 << ',' << modes.omega[m] << ',' << i + 1 << ',' << modes(i, m)
                << '\n';
        }
    }
    os << buf.str();
}

} // namespace lightcone
