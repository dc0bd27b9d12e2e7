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
#include <sstream>
#include <string>

#include <doctest.h>

#include "lightcone/error.hpp"
#include "lightcone/model.hpp"

using namespace lightcone;

namespace {

void check_symmetric_zero_diagonal(const CouplingMatrix &J) {
    for (std::size_t i = 0; i < J.size(); ++i) {
        CHECK(J(i, i) == 0.0);
        for (std::size_t j = 0; j < J.size(); ++j) {
            CHECK(J(i, j) == J(j, i));
        }
    }
}

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("expected an exception");
    return ErrorCode::io;
}

} // namespace

TEST_CASE("power-law couplings follow J0 / |i-j|^alpha") {
    const auto J = power_law_couplings(3, 1.0, 1.0);
    CHECK(J(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(J(0, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(J(1, 2) == doctest::Approx(1.0).epsilon(1e-15));

    const auto U = power_law_couplings(4, 1.0, 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(U(i, j) == (i == j ? 0.0 : 1.0));
        }
    }

    const auto L = power_law_couplings(11, 1.0, 0.63);
    CHECK(L(0, 10) == doctest::Approx(0.23442288153199226).epsilon(1e-14));
    CHECK(L.max_abs() == 1.0);
}

TEST_CASE("power-law couplings decrease with separation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> alpha(0.05, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 14);
        const auto J = power_law_couplings(n, 0.5 + static_cast<double>(trial), alpha(rng));
        check_symmetric_zero_diagonal(J);
        for (std::size_t r = 1; r + 1 < n; ++r) {
            CHECK(J(0, r) > J(0, r + 1));
        }
    }
}

TEST_CASE("nearest-neighbour couplings") {
    const auto J = nearest_neighbor_couplings(3, 2.0);
    CHECK(J(0, 1) == 2.0);
    CHECK(J(1, 2) == 2.0);
    CHECK(J(0, 2) == 0.0);
    check_symmetric_zero_diagonal(J);
    const auto P = nearest_neighbor_couplings(2, 1.0);
    CHECK(P(0, 1) == 1.0);
    CHECK(code_of([] { fit_power_law(nearest_neighbor_couplings(8, 1.0)); }) ==
          ErrorCode::non_positive_coupling);
}

TEST_CASE("constructors reject invalid arguments") {
    CHECK(code_of([] { power_law_couplings(1, 1.0, 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { power_law_couplings(4, 0.0, 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { power_law_couplings(4, 1.0, -0.1); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { nearest_neighbor_couplings(4, -1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { CouplingMatrix::from_dense(2, {0, 1, 2, 0}); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { CouplingMatrix::from_dense(2, {1, 1, 1, 0}); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { CouplingMatrix::from_dense(2, {0, 0, 0, 0}); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { CouplingMatrix::from_dense(2, {0, NAN, NAN, 0}); }) ==
          ErrorCode::invalid_argument);
}

TEST_CASE("fit_power_law inverts power_law_couplings") {
    const auto f = fit_power_law(power_law_couplings(11, 1.0, 1.19));
    CHECK(f.alpha_hat == doctest::Approx(1.19).epsilon(1e-12));
    CHECK(f.rms_log_residual < 1e-12);
    const auto u = fit_power_law(power_law_couplings(6, 2.0, 0.0));
    CHECK(std::abs(u.alpha_hat) < 1e-12);
    CHECK(u.J0_hat == doctest::Approx(2.0).epsilon(1e-12));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> alpha(0.0, 3.0), j0(0.1, 10.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng() % 12);
        const double a = alpha(rng), J0 = j0(rng);
        const auto fit = fit_power_law(power_law_couplings(n, J0, a));
        CHECK(std::abs(fit.alpha_hat - a) <= 1e-10 * std::max(1.0, a));
        CHECK(std::abs(fit.J0_hat - J0) <= 1e-10 * J0);
    }
}

TEST_CASE("separation means average over pairs") {
    const auto J = CouplingMatrix::from_dense(3, {0, 1, 4, 1, 0, 3, 4, 3, 0});
    const auto m = separation_means(J);
    REQUIRE(m.size() == 2);
    CHECK(m[0] == 2.0);
    CHECK(m[1] == 4.0);
}

TEST_CASE("coupling CSV is row-major with 1-based indices") {
    std::ostringstream os;
    write_couplings_csv(os, power_law_couplings(2, 1.0, 1.0));
    CHECK(os.str() == "i,j,J\n1,1,0\n1,2,1\n2,1,1\n2,2,0\n");
}

TEST_CASE("scaled keeps structure") {
    const auto J = power_law_couplings(5, 3.0, 1.0).scaled(1.0 / 3.0);
    CHECK(J.max_abs() == doctest::Approx(1.0));
    check_symmetric_zero_diagonal(J);
}

TEST_CASE("build_couplings dispatches on the source") {
    CHECK(build_couplings({4, PowerLawSource{1.0, 1.0}})(0, 3) == doctest::Approx(1.0 / 3.0));
    CHECK(build_couplings({4, NearestNeighborSource{2.0}})(1, 2) == 2.0);
    ExplicitSource e{{{0, 1}, {1, 0}}};
    CHECK(build_couplings({2, e})(0, 1) == 1.0);
    CHECK(code_of([&] { build_couplings({3, e}); }) == ErrorCode::invalid_argument);
    CHECK(to_string(ErrorCode::memory_cap) == std::string("memory-cap"));
}
