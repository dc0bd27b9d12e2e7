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

#include <Eigen/Dense>

#include "lightcone/error.hpp"
#include "lightcone/ions.hpp"

namespace lightcone {

std::vector<double> axial_gradient(const std::vector<double> &u) {
    const std::size_t n = u.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        double gi = u[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double d = u[i] - u[j];
            gi -= std::copysign(1.0 / (d * d), d);
        }
        g[i] = gi;
    }
    return g;
}

std::vector<double> axial_hessian(const std::vector<double> &u) {
    const std::size_t n = u.size();
    std::vector<double> h(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double c = 2.0 / std::pow(std::abs(u[i] - u[j]), 3);
            h[i * n + j] = -c;
            diag += c;
        }
        h[i * n + i] = diag;
    }
    return h;
}

namespace {

double axial_potential(const std::vector<double> &u) {
    double v = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        v += 0.5 * u[i] * u[i];
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            v += 1.0 / std::abs(u[i] - u[j]);
        }
    }
    return v;
}

double norm(const std::vector<double> &v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

bool strictly_increasing(const std::vector<double> &u) {
    return std::adjacent_find(u.begin(), u.end(), std::greater_equal<>()) == u.end();
}

// Damped Newton from `u`. Returns true on convergence.
bool newton_solve(std::vector<double> &u, const EquilibriumOptions &opts) {
    const std::size_t n = u.size();
    for (int it = 0; it < opts.max_iterations; ++it) {
        const std::vector<double> g = axial_gradient(u);
        const double gnorm = norm(g);
        if (gnorm < 0.1 * opts.gradient_tolerance) {
            return true;
        }
        const std::vector<double> h = axial_hessian(u);
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
            H(h.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        Eigen::Map<const Eigen::VectorXd> G(g.data(), static_cast<Eigen::Index>(n));
        const Eigen::VectorXd step = H.ldlt().solve(-G);

        // Backtrack until ordering is kept and the potential decreases.
        const double v0 = axial_potential(u);
        double damping = 1.0;
        std::vector<double> trial(n);
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = u[i] + damping * step[static_cast<Eigen::Index>(i)];
            }
            if (strictly_increasing(trial) &&
                (axial_potential(trial) <= v0 || norm(axial_gradient(trial)) < gnorm)) {
                accepted = true;
                break;
            }
            damping *= 0.5;
        }
        if (!accepted) {
            // Stationary to within rounding: no representable descent step left.
            return gnorm < opts.gradient_tolerance;
        }
        u = trial;
    }
    return norm(axial_gradient(u)) < opts.gradient_tolerance;
}

void symmetrize(std::vector<double> &u) {
    const std::size_t n = u.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = 0.5 * (u[i] - u[n - 1 - i]);
    }
    u = std::move(s);
}

} // namespace

EquilibriumPositions equilibrium_positions(std::size_t n, const EquilibriumOptions &opts) {
    require(n >= 2, ErrorCode::invalid_argument, "equilibrium_positions: n must be >= 2");

    const double scale = std::pow(static_cast<double>(n), 0.56);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = scale * (-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1));
    }

    if (!newton_solve(u, opts)) {
        // Continuation: grow the chain one ion at a time from the 2-ion solution.
        u = {-std::cbrt(0.25), std::cbrt(0.25)};
        for (std::size_t m = 3; m <= n; ++m) {
            const double spacing = u.back() - u[u.size() - 2];
            u.push_back(u.back() + spacing);
            const double shift = 0.5 * spacing;
            for (double &x : u) {
                x -= shift;
            }
            if (!newton_solve(u, opts)) {
                fail(ErrorCode::non_convergence,
                     "equilibrium_positions: Newton iteration did not converge for n=" +
                         std::to_string(m));
            }
        }
    }
    symmetrize(u);
    // Final polish after symmetrization.
    newton_solve(u, opts);
    symmetrize(u);
    if (!(norm(axial_gradient(u)) < opts.gradient_tolerance)) {
        fail(ErrorCode::non_convergence,
             "equilibrium_positions: gradient norm above tolerance after " +
                 std::to_string(opts.max_iterations) + " iterations");
    }
    return {std::move(u)};
}

} // namespace lightcone
