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
#include <random>
#include <vector>

#include <doctest.h>

#include "lightcone/evolution.hpp"
#include "lightcone/kernels.hpp"

using namespace lightcone;
using kernels::KernelTable;
using kernels::SimdLevel;

namespace {

std::vector<cplx> random_vector(std::size_t len, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(len);
    for (auto &x : v) {
        x = {g(rng), g(rng)};
    }
    return v;
}

std::vector<double> random_reals(std::size_t len, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<double> v(len);
    for (auto &x : v) {
        x = g(rng);
    }
    return v;
}

double max_diff(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

// Every table the build and CPU provide, scalar first.
std::vector<const KernelTable *> tables() {
    std::vector<const KernelTable *> out{&kernels::table(SimdLevel::scalar)};
    if (kernels::is_supported(SimdLevel::avx2)) {
        out.push_back(&kernels::table(SimdLevel::avx2));
    }
    return out;
}

constexpr double kTol = 1e-13;

} // namespace

TEST_CASE("dispatch reports a usable level") {
    CHECK(kernels::is_supported(SimdLevel::scalar));
    CHECK(kernels::table(SimdLevel::scalar).level == SimdLevel::scalar);
    CHECK(kernels::is_supported(kernels::detect_level()));
    CHECK(kernels::table(kernels::detect_level()).level == kernels::detect_level());
    MESSAGE("active kernels: " << kernels::to_string(kernels::active().level));
}

TEST_CASE("vector kernels agree with the scalar reference") {
    const auto all = tables();
    if (all.size() == 1) {
        MESSAGE("no vector kernels on this machine; equivalence is vacuous");
    }
    const KernelTable &ref = *all.front();
    std::mt19937_64 rng(31);
    for (const KernelTable *t : all) {
        CAPTURE(kernels::to_string(t->level));
        for (std::size_t len : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 16u, 33u, 64u, 1024u, 4099u}) {
            CAPTURE(len);
            const auto in = random_vector(len, rng);
            const auto add = random_vector(len, rng);
            const auto d = random_reals(len, rng);

            auto a = in, b = in;
            ref.scale_diagonal(a.data(), d.data(), len);
            t->scale_diagonal(b.data(), d.data(), len);
            CHECK(max_diff(a, b) < kTol);

            std::vector<cplx> o1(len), o2(len);
            ref.diagonal_fma(o1.data(), d.data(), in.data(), add.data(), len);
            t->diagonal_fma(o2.data(), d.data(), in.data(), add.data(), len);
            CHECK(max_diff(o1, o2) < kTol);

            a = add;
            b = add;
            ref.chebyshev_next(a.data(), in.data(), o1.data(), 1.7, -0.3, len);
            t->chebyshev_next(b.data(), in.data(), o1.data(), 1.7, -0.3, len);
            CHECK(max_diff(a, b) < kTol);

            a = add;
            b = add;
            ref.axpy(a.data(), cplx{0.3, -1.1}, in.data(), len);
            t->axpy(b.data(), cplx{0.3, -1.1}, in.data(), len);
            CHECK(max_diff(a, b) < kTol);

            std::vector<double> p1(len), p2(len);
            ref.abs2(p1.data(), in.data(), len);
            t->abs2(p2.data(), in.data(), len);
            for (std::size_t k = 0; k < len; ++k) {
                CHECK(std::abs(p1[k] - p2[k]) < kTol * (1.0 + p1[k]));
            }
        }
        for (unsigned nbits : {1u, 2u, 3u, 6u, 11u}) {
            const std::size_t len = std::size_t{1} << nbits;
            for (unsigned bit = 0; bit < nbits; ++bit) {
                CAPTURE(len);
                CAPTURE(bit);
                const auto in = random_vector(len, rng);
                auto a = in, b = in;
                ref.butterfly(a.data(), len, bit);
                t->butterfly(b.data(), len, bit);
                CHECK(max_diff(a, b) == 0.0);

                auto y1 = random_vector(len, rng);
                auto y2 = y1;
                ref.y_flip_accumulate(y1.data(), in.data(), len, bit, 0.37);
                t->y_flip_accumulate(y2.data(), in.data(), len, bit, 0.37);
                CHECK(max_diff(y1, y2) < kTol);
            }
        }
    }
}

TEST_CASE("scalar butterfly and y-flip by hand") {
    const KernelTable &k = kernels::table(SimdLevel::scalar);
    std::vector<cplx> v{1.0, 2.0, 3.0, 4.0};
    k.butterfly(v.data(), 4, 1);
    CHECK(v == std::vector<cplx>{4.0, 6.0, -2.0, -2.0});
    std::vector<cplx> out(2, 0.0);
    const std::vector<cplx> in{1.0, 0.0};
    k.y_flip_accumulate(out.data(), in.data(), 2, 0, 1.0);
    CHECK(out[0] == cplx{0.0, 0.0});
    CHECK(out[1] == cplx{0.0, 1.0});
}

TEST_CASE("engine results do not depend on the kernel table") {
    const auto all = tables();
    const std::size_t n = 9;
    const auto J = power_law_couplings(n, 1.0, 0.9);
    std::mt19937_64 rng(8);
    auto psi = random_vector(std::size_t{1} << n, rng);
    double norm = 0.0;
    for (const auto &a : psi) {
        norm += std::norm(a);
    }
    for (auto &a : psi) {
        a /= std::sqrt(norm);
    }
    for (SpinModel m : {SpinModel::ising, SpinModel::xy, SpinModel::ising_field}) {
        const double B = m == SpinModel::ising_field ? 2.5 : 0.0;
        const Hamiltonian ref(J, m, B, all.front());
        std::vector<cplx> r(psi.size());
        ref.apply(psi, r);
        for (const KernelTable *t : all) {
            const Hamiltonian H(J, m, B, t);
            std::vector<cplx> o(psi.size());
            H.apply(psi, o);
            CHECK(max_diff(r, o) < 1e-11);

            const std::vector<double> times{0.0, 0.4, 1.3};
            const auto f_ref = correlation_field(ref, times);
            const auto f = correlation_field(H, times);
            for (std::size_t k = 0; k < times.size(); ++k) {
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        CHECK(std::abs(f(i, j, k) - f_ref(i, j, k)) < 1e-11);
                    }
                }
            }
            const auto c1 = correlation_matrix(psi, n, *all.front());
            const auto c2 = correlation_matrix(psi, n, *t);
            for (std::size_t k = 0; k < c1.size(); ++k) {
                CHECK(std::abs(c1[k] - c2[k]) < 1e-9);
            }
        }
    }
}
