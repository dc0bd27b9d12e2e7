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
#include <numbers>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "lightcone/error.hpp"
#include "lightcone/ions.hpp"
#include "lightcone/model.hpp"

using namespace lightcone;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cyclic Jacobi rotations on a dense symmetric matrix; returns eigenvalues
// in ascending order. Independent of the library's eigensolver.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if (off < 1e-30) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) {
                    continue;
                }
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t k = 0; k < n; ++k) {
        ev[k] = a[k * n + k];
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

double norm(const std::vector<double> &v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

IonTrapParams trap(std::size_t n, double detuning_above_com) {
    IonTrapParams p;
    p.n_ions = n;
    p.axial_freq = kTwoPi * 0.6e6;
    p.transverse_freq = kTwoPi * 4.8e6;
    p.rabi_freq = kTwoPi * 1.0e6;
    p.recoil_freq = kTwoPi * 20e3;
    p.detuning = p.transverse_freq + kTwoPi * detuning_above_com;
    return p;
}

} // namespace

TEST_CASE("two-ion equilibrium") {
    const auto pos = equilibrium_positions(2);
    const double x = std::cbrt(0.25);
    CHECK(std::abs(pos.u[0] + x) < 1e-10);
    CHECK(std::abs(pos.u[1] - x) < 1e-10);
}

TEST_CASE("three-ion equilibrium matches a bisection solve") {
    // Outer ion at x: x - 1/x^2 - 1/(2x)^2 = 0.
    auto f = [](double x) { return x - 1.0 / (x * x) - 1.0 / (4.0 * x * x); };
    double lo = 0.5, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    const double x = 0.5 * (lo + hi);
    CHECK(x == doctest::Approx(1.0772173450159419).epsilon(1e-13));
    const auto pos = equilibrium_positions(3);
    CHECK(std::abs(pos.u[0] + x) < 1e-10);
    CHECK(std::abs(pos.u[1]) < 1e-12);
    CHECK(std::abs(pos.u[2] - x) < 1e-10);
}

TEST_CASE("equilibrium invariants across chain lengths") {
    for (std::size_t n : {4u, 7u, 11u, 20u, 40u, 64u}) {
        CAPTURE(n);
        const auto pos = equilibrium_positions(n);
        REQUIRE(pos.u.size() == n);
        double com = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            com += pos.u[i];
            if (i > 0) {
                CHECK(pos.u[i] > pos.u[i - 1]);
            }
            CHECK(std::abs(pos.u[i] + pos.u[n - 1 - i]) < 1e-10);
        }
        CHECK(std::abs(com) < 1e-12 * static_cast<double>(n));
        CHECK(norm(axial_gradient(pos.u)) < 1e-12);
        const auto ev = jacobi_eigenvalues(axial_hessian(pos.u), n);
        CHECK(ev.front() > 0.0);
        // The axial centre-of-mass mode has unit curvature.
        CHECK(ev.front() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("two-ion transverse modes by hand") {
    const double aniso = 5.0;
    const auto modes = transverse_modes(equilibrium_positions(2), aniso);
    CHECK(modes.omega[0] == doctest::Approx(aniso).epsilon(1e-12));
    CHECK(modes.omega[1] == doctest::Approx(std::sqrt(aniso * aniso - 1.0)).epsilon(1e-12));
    CHECK(modes(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(modes(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(modes(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(modes(1, 1) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("transverse modes: orthogonality, COM mode, Jacobi cross-check") {
    for (std::size_t n : {3u, 5u, 11u, 16u}) {
        CAPTURE(n);
        const double aniso = 8.0;
        const auto pos = equilibrium_positions(n);
        const auto modes = transverse_modes(pos, aniso, 0.6);
        CHECK(std::abs(modes.omega[0] - 0.6 * aniso) < 1e-10);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(modes(i, 0) - 1.0 / std::sqrt(static_cast<double>(n))) < 1e-10);
        }
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                double col = 0.0, row = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    col += modes(k, a) * modes(k, b);
                    row += modes(a, k) * modes(b, k);
                }
                CHECK(std::abs(col - (a == b ? 1.0 : 0.0)) < 1e-10);
                CHECK(std::abs(row - (a == b ? 1.0 : 0.0)) < 1e-10);
            }
        }
        for (std::size_t m = 0; m < n; ++m) {
            std::size_t first = 0;
            while (std::abs(modes(first, m)) <= 1e-10) {
                ++first;
            }
            CHECK(modes(first, m) > 0.0);
            if (m > 0) {
                CHECK(modes.omega[m] < modes.omega[m - 1]);
            }
            CHECK(modes.omega[m] > 0.0);
        }

        std::vector<double> A(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            A[i * n + i] = aniso * aniso;
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    const double d = std::abs(pos.u[i] - pos.u[j]);
                    A[i * n + j] = 1.0 / (d * d * d);
                    A[i * n + i] -= 1.0 / (d * d * d);
                }
            }
        }
        const auto ev = jacobi_eigenvalues(A, n);
        for (std::size_t m = 0; m < n; ++m) {
            CHECK(std::abs(0.6 * std::sqrt(ev[n - 1 - m]) - modes.omega[m]) < 1e-10);
        }
    }
}

TEST_CASE("weak transverse confinement is a zigzag instability") {
    try {
        transverse_modes(equilibrium_positions(11), 1.5);
        FAIL("expected zigzag_instability");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::zigzag_instability);
    }
}

TEST_CASE("ion couplings: sign, symmetry and the 1/mu^2 tail") {
    IonTrapParams p = trap(2, 40e3);
    const auto J = ion_trap_couplings(p);
    CHECK(J(0, 1) > 0.0);
    CHECK(J(0, 0) == 0.0);

    const auto modes = transverse_modes(equilibrium_positions(5), p.anisotropy(), p.axial_freq);
    p.n_ions = 5;
    p.detuning = 1e3 * p.transverse_freq;
    const auto far = ion_couplings(modes, p);
    p.detuning = 1e4 * p.transverse_freq;
    const auto farther = ion_couplings(modes, p);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = i + 1; j < 5; ++j) {
            CHECK(far(i, j) == doctest::Approx(100.0 * farther(i, j)).epsilon(1e-5));
        }
    }
}

TEST_CASE("eleven ions detuned above the COM mode give long-range uniform-sign couplings") {
    for (double d : {20e3, 40e3, 80e3}) {
        CAPTURE(d);
        const auto J = ion_trap_couplings(trap(11, d));
        for (std::size_t i = 0; i < 11; ++i) {
            for (std::size_t j = 0; j < 11; ++j) {
                CHECK(J(i, j) == J(j, i));
                if (i != j) {
                    CHECK(J(i, j) > 0.0);
                }
            }
        }
        const auto fit = fit_power_law(J);
        CHECK(fit.alpha_hat > 0.3);
        CHECK(fit.alpha_hat < 1.5);
        if (d == 20e3) {
            CHECK(fit.alpha_hat < 1.0);
        }
    }
    // Weaker trap: detunings that span the experiment's range of exponents.
    IonTrapParams p = trap(11, 20e3);
    p.axial_freq = kTwoPi * 0.5e6;
    p.detuning = p.transverse_freq + kTwoPi * 20e3;
    const double lo = fit_power_law(ion_trap_couplings(p)).alpha_hat;
    p.detuning = p.transverse_freq + kTwoPi * 80e3;
    const double hi = fit_power_law(ion_trap_couplings(p)).alpha_hat;
    CHECK(lo > 0.0);
    CHECK(lo < 1.0);
    CHECK(hi > 1.0);
    CHECK(hi < 3.0);
}

TEST_CASE("resonant detuning and invalid parameters are rejected") {
    IonTrapParams p = trap(4, 50.0); // within the default 100 Hz guard band
    try {
        ion_trap_couplings(p);
        FAIL("expected resonance");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::resonance);
    }
    p = trap(4, 40e3);
    p.transverse_freq = 0.5 * p.axial_freq;
    CHECK_THROWS_AS(validate(p), Error);
    p = trap(4, 40e3);
    p.rabi_freq = 0.0;
    try {
        validate(p);
        FAIL("expected invalid_argument");
    } catch (const Error &e) {
        CHECK(std::string(e.what()).find("rabi_freq") != std::string::npos);
    }
}

TEST_CASE("position and mode CSVs") {
    std::ostringstream pos, modes;
    write_positions_csv(pos, equilibrium_positions(2));
    CHECK(pos.str().rfind("ion,u\n1,", 0) == 0);
    write_modes_csv(modes, transverse_modes(equilibrium_positions(2), 4.0));
    CHECK(modes.str().rfind("mode,omega,ion,b\n", 0) == 0);
    int lines = 0;
    for (char c : modes.str()) {
        lines += c == '\n';
    }
    CHECK(lines == 5);
}
