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

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "lightcone/error.hpp"
#include "lightcone/evolution.hpp"
#include "oracle/dense_oracle.hpp"

using namespace lightcone;

namespace {

oracle::Mat probe(const Hamiltonian &H) {
    const std::size_t dim = H.dimension();
    oracle::Mat M(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    std::vector<cplx> e(dim), col(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::fill(e.begin(), e.end(), cplx{});
        e[c] = 1.0;
        H.apply(e, col);
        for (std::size_t r = 0; r < dim; ++r) {
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
        }
    }
    return M;
}

oracle::Model to_oracle(SpinModel m) {
    switch (m) {
    case SpinModel::ising: return oracle::Model::ising;
    case SpinModel::xy: return oracle::Model::xy;
    case SpinModel::ising_field: return oracle::Model::ising_field;
    }
    return oracle::Model::ising;
}

} // namespace

TEST_CASE("two-spin XY matrix by hand") {
    const auto J = CouplingMatrix::from_dense(2, {0, 1, 1, 0});
    const auto M = probe(Hamiltonian(J, SpinModel::xy));
    // Basis |down down>, |up down>, |down up>, |up up> (bit 0 = spin 1).
    const double h[4][4] = {
        {0.5, 0.0, 0.0, 0.5},
        {0.0, -0.5, 0.5, 0.0},
        {0.0, 0.5, -0.5, 0.0},
        {0.5, 0.0, 0.0, 0.5},
    };
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            CHECK(std::abs(M(r, c) - h[r][c]) < 1e-14);
        }
    }
}

TEST_CASE("matrix-free action equals the Kronecker construction") {
    std::mt19937_64 rng(17);
    for (SpinModel m : {SpinModel::ising, SpinModel::xy, SpinModel::ising_field}) {
        for (std::size_t n : {2u, 3u, 4u, 5u, 6u}) {
            CAPTURE(n);
            CAPTURE(to_string(m));
            const auto Jv = oracle::random_couplings(n, rng, -1.0, 1.0);
            const double B = m == SpinModel::ising_field ? 1.7 : 0.0;
            const Hamiltonian H(CouplingMatrix::from_dense(n, Jv), m, B);
            const auto dense = oracle::hamiltonian(Jv, n, to_oracle(m), B);
            CHECK((probe(H) - dense).cwiseAbs().maxCoeff() < 1e-13);

            const Eigen::SelfAdjointEigenSolver<oracle::Mat> eig(dense);
            const auto [lo, hi] = H.spectral_bounds();
            CHECK(lo <= eig.eigenvalues().minCoeff() + 1e-12);
            CHECK(hi >= eig.eigenvalues().maxCoeff() - 1e-12);
        }
    }
}

TEST_CASE("zero field reduces to the Ising action") {
    const auto J = power_law_couplings(5, 1.0, 1.0);
    CHECK((probe(Hamiltonian(J, SpinModel::ising_field, 0.0)) -
           probe(Hamiltonian(J, SpinModel::ising)))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("Hermitian action on random vectors") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const std::size_t n = 10;
    const auto J = power_law_couplings(n, 1.0, 0.7);
    for (SpinModel m : {SpinModel::ising, SpinModel::xy, SpinModel::ising_field}) {
        const Hamiltonian H(J, m, m == SpinModel::ising_field ? 3.0 : 0.0);
        std::vector<cplx> phi(H.dimension()), psi(H.dimension()), Hphi(H.dimension()),
            Hpsi(H.dimension());
        for (std::size_t s = 0; s < phi.size(); ++s) {
            phi[s] = {g(rng), g(rng)};
            psi[s] = {g(rng), g(rng)};
        }
        H.apply(phi, Hphi);
        H.apply(psi, Hpsi);
        cplx a = 0.0, b = 0.0;
        double scale = 0.0;
        for (std::size_t s = 0; s < phi.size(); ++s) {
            a += std::conj(phi[s]) * Hpsi[s];
            b += std::conj(psi[s]) * Hphi[s];
            scale += std::abs(phi[s]) * std::abs(Hpsi[s]);
        }
        CHECK(std::abs(a - std::conj(b)) < 1e-12 * scale);
    }
}

TEST_CASE("pair energies and the Walsh-Hadamard transform") {
    std::mt19937_64 rng(4);
    const std::size_t n = 7;
    const auto Jv = oracle::random_couplings(n, rng, -1.0, 1.0);
    const auto J = CouplingMatrix::from_dense(n, Jv);
    const auto E = pair_energies(J, 0.5);
    for (std::size_t s = 0; s < E.size(); ++s) {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double si = (s >> i & 1) ? -1.0 : 1.0;
                const double sj = (s >> j & 1) ? -1.0 : 1.0;
                e += 0.5 * Jv[i * n + j] * si * sj;
            }
        }
        CHECK(std::abs(E[s] - e) < 1e-13);
    }

    std::normal_distribution<double> g;
    const std::size_t dim = 64;
    std::vector<cplx> v(dim), w(dim);
    for (auto &x : v) {
        x = {g(rng), g(rng)};
    }
    for (std::size_t s = 0; s < dim; ++s) {
        for (std::size_t t = 0; t < dim; ++t) {
            w[s] += (std::popcount(s & t) % 2 ? -1.0 : 1.0) * v[t];
        }
    }
    walsh_hadamard(v, kernels::active());
    for (std::size_t s = 0; s < dim; ++s) {
        CHECK(std::abs(v[s] - w[s]) < 1e-12);
    }
}

TEST_CASE("construction errors") {
    const auto J = power_law_couplings(4, 1.0, 1.0);
    for (SpinModel m : {SpinModel::ising, SpinModel::xy}) {
        try {
            build_hamiltonian(J, m, 1.0);
            FAIL("expected invalid_argument");
        } catch (const Error &e) {
            CHECK(e.code() == ErrorCode::invalid_argument);
        }
    }
    try {
        build_hamiltonian(power_law_couplings(25, 1.0, 1.0), SpinModel::xy);
        FAIL("expected memory_cap");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::memory_cap);
    }
    CHECK(all_down_state(3) == std::vector<cplx>{1, 0, 0, 0, 0, 0, 0, 0});
}
