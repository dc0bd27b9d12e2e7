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
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include <doctest.h>

#include "lightcone/analysis.hpp"
#include "lightcone/error.hpp"
#include "lightcone/evolution.hpp"
#include "lightcone/least_squares.hpp"

using namespace lightcone;
using namespace lightcone::analysis;

namespace {

// Field whose every pair at separation r carries f(r, t).
CorrelationField synthetic(std::size_t n, const std::vector<double> &times,
                           const std::function<double(double, double)> &f) {
    CorrelationField field(n, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    const double r = std::abs(static_cast<double>(j) - static_cast<double>(i));
                    field.set(i, j, k, f(r, times[k]));
                }
            }
        }
    }
    return field;
}

LightConeBoundary boundary_from(const std::vector<double> &r, const std::vector<double> &t) {
    LightConeBoundary b;
    b.threshold = 0.1;
    for (std::size_t k = 0; k < r.size(); ++k) {
        b.arrivals.push_back({static_cast<std::size_t>(r[k]), t[k], std::nullopt});
    }
    return b;
}

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::io;
}

} // namespace

TEST_CASE("linear least squares") {
    const std::vector<double> x{1, 2, 3, 4, 5}, y{3, 5, 7, 9, 11};
    const auto f = fitting::linear_fit(x, y);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.rms_residual < 1e-14);
    const auto two = fitting::linear_fit(std::vector<double>{0, 1}, std::vector<double>{1, 3});
    CHECK(two.sigma_slope == 0.0);
    // Heavy weight pins the line to the weighted points.
    const std::vector<double> w{1e12, 1e12, 1, 1, 1}, yb{3, 5, 0, 0, 0};
    const auto fw = fitting::linear_fit(x, yb, w);
    CHECK(fw.slope == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(code_of([] { fitting::linear_fit(std::vector<double>{1, 1}, std::vector<double>{0, 1}); }) ==
          ErrorCode::degenerate_fit);
    CHECK(code_of([] { fitting::linear_fit(std::vector<double>{1}, std::vector<double>{0}); }) ==
          ErrorCode::insufficient_data);
}

TEST_CASE("Levenberg-Marquardt recovers an exponential") {
    std::vector<double> x, y;
    for (int r = 1; r <= 10; ++r) {
        x.push_back(r);
        y.push_back(0.7 * std::exp(-r / 2.5));
    }
    const fitting::Model m = [](double r, std::span<const double> p, std::span<double> g) {
        const double e = std::exp(-r / p[1]);
        g[0] = e;
        g[1] = p[0] * e * r / (p[1] * p[1]);
        return p[0] * e;
    };
    const auto fit = fitting::levenberg_marquardt(m, x, y, {0.1, 1.0});
    CHECK(fit.converged);
    CHECK(fit.params[0] == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(fit.params[1] == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("light cone of trivial and constructed fields") {
    const auto times = uniform_grid(4.0, 81);
    CHECK(extract_light_cone(synthetic(8, times, [](double, double) { return 0.0; }), 0.04).empty());

    // Step fronts moving at v = 2 land exactly on grid points.
    const double v = 2.0;
    const auto step = synthetic(8, uniform_grid(4.0, 17), [&](double r, double t) { return v * t >= r ? 1.0 : 0.0; });
    const auto bs = extract_light_cone(step, 1.0);
    REQUIRE(bs.arrivals.size() == 7);
    for (const auto &a : bs.arrivals) {
        CHECK(a.time == doctest::Approx(static_cast<double>(a.r) / v).epsilon(1e-14));
    }
    // Linear ramps through the contour are interpolated exactly.
    const auto ramp = synthetic(8, times, [&](double r, double t) { return 0.3 + 0.05 * (t - r / 2.7); });
    for (const auto &a : extract_light_cone(ramp, 0.3).arrivals) {
        CHECK(a.time == doctest::Approx(static_cast<double>(a.r) / 2.7).epsilon(1e-12));
    }
}

TEST_CASE("pair reduction records its source") {
    const std::vector<double> times{0.0, 1.0};
    CorrelationField f(4, times);
    f.set(0, 1, 1, 0.2);
    f.set(1, 2, 1, 0.5);
    f.set(2, 3, 1, 0.1);
    const auto mx = reduce_pairs(f, 1, 1, PairReduce::max);
    CHECK(mx.value == 0.5);
    CHECK(mx.i == 1);
    CHECK(mx.j == 2);
    CHECK(reduce_pairs(f, 1, 1, PairReduce::mean).value == doctest::Approx(0.8 / 3));
    const auto b = extract_light_cone(f, 0.3);
    REQUIRE(b.arrivals.size() == 1);
    CHECK(b.arrivals[0].source_pair == std::make_pair(std::size_t{1}, std::size_t{2}));
    CHECK(b.arrivals[0].time == doctest::Approx(0.6));
    CHECK(extract_light_cone(f, 0.3, PairReduce::mean).empty());
    CHECK(b.arrival(1).has_value());
    CHECK_FALSE(b.arrival(2).has_value());

    CorrelationField early(3, times);
    early.set(0, 1, 0, 0.5);
    CHECK(extract_light_cone(early, 0.3).arrivals[0].time == 0.0);
    CHECK(code_of([&] { extract_light_cone(f, 0.0); }) == ErrorCode::invalid_argument);
    CorrelationField uneven(3, {0.0, 1.0, 3.0});
    CHECK(code_of([&] { extract_light_cone(uneven, 0.1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("arrival times are monotone in the threshold") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    const auto times = uniform_grid(5.0, 120);
    for (int trial = 0; trial < 20; ++trial) {
        const double v = u(rng), w = u(rng);
        const auto f = synthetic(10, times, [&](double r, double t) {
            return std::sin(w * t) * std::sin(w * t) * std::exp(-r / (1.0 + v * t));
        });
        double prev_th = 0.0;
        LightConeBoundary prev;
        for (double th : {0.01, 0.03, 0.05, 0.1, 0.2, 0.4}) {
            const auto b = extract_light_cone(f, th);
            if (prev_th > 0.0) {
                for (const auto &a : b.arrivals) {
                    const auto before = prev.arrival(a.r);
                    REQUIRE(before.has_value());
                    CHECK(a.time >= *before - 1e-12);
                }
            }
            prev = b;
            prev_th = th;
        }
    }
}

TEST_CASE("boundary is stable under grid refinement") {
    auto field_on = [](std::size_t points) {
        return synthetic(9, uniform_grid(3.0, points),
                         [](double r, double t) { return std::tanh(std::pow(t, 2) * 4.0 / r); });
    };
    const double coarse_dt = 3.0 / 60;
    const auto a = extract_light_cone(field_on(61), 0.2);
    const auto b = extract_light_cone(field_on(121), 0.2);
    REQUIRE(a.arrivals.size() == b.arrivals.size());
    for (std::size_t k = 0; k < a.arrivals.size(); ++k) {
        CHECK(std::abs(a.arrivals[k].time - b.arrivals[k].time) < coarse_dt);
    }
}

TEST_CASE("boundary power-law fits") {
    std::vector<double> r, lin, root;
    for (int k = 1; k <= 10; ++k) {
        r.push_back(k);
        lin.push_back(k / 4.0);
        root.push_back(std::sqrt(static_cast<double>(k)));
    }
    const auto fl = fit_boundary_power_law(boundary_from(r, lin));
    CHECK(fl.params[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fl.params[0] == doctest::Approx(0.25).epsilon(1e-12));
    const auto fr = fit_boundary_power_law(boundary_from(r, root));
    CHECK(std::abs(fr.params[1] - 0.5) < 1e-10);
    CHECK(fr.form == FitForm::power_law);
    CHECK(fr.n_points == 10);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ua(0.05, 3.0), ub(0.2, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double a = ua(rng), beta = ub(rng);
        std::vector<double> t;
        for (double x : r) {
            t.push_back(a * std::pow(x, beta));
        }
        const auto f = fit_boundary_power_law(boundary_from(r, t));
        CHECK(std::abs(f.params[0] - a) < 1e-8 * a);
        CHECK(std::abs(f.params[1] - beta) < 1e-8);
    }
    CHECK(code_of([&] {
              fit_boundary_power_law(boundary_from({1, 2}, {0.5, 1.0}));
          }) == ErrorCode::insufficient_data);
}

TEST_CASE("velocity curves") {
    FitResult lin;
    lin.form = FitForm::power_law;
    lin.params = {0.25, 1.0};
    const std::vector<double> r{1, 2, 3, 4};
    const auto v = propagation_velocity(lin, r, 1.0);
    for (double x : v.v) {
        CHECK(x == doctest::Approx(4.0).epsilon(1e-14));
    }
    CHECK(v.v_lr == doctest::Approx(12.0 * std::numbers::e));
    CHECK(propagation_velocity(lin, r, 0.5).v_lr == doctest::Approx(6.0 * std::numbers::e));

    FitResult sq = lin;
    sq.params = {1.0, 0.5};
    const auto vs = propagation_velocity(sq, r, 1.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
        CHECK(vs.v[k] == doctest::Approx(2.0 * std::sqrt(r[k])));
    }
    FitResult bad = lin;
    bad.params = {1.0, -0.1};
    CHECK(code_of([&] { propagation_velocity(bad, r, 1.0); }) == ErrorCode::degenerate_fit);

    // Fit then differentiate is the identity on linear cones.
    for (double speed : {0.3, 1.0, 7.5}) {
        std::vector<double> t;
        for (int k = 1; k <= 9; ++k) {
            t.push_back(k / speed);
        }
        std::vector<double> rr{1, 2, 3, 4, 5, 6, 7, 8, 9};
        const auto b = boundary_from(rr, t);
        const auto curve = propagation_velocity(fit_boundary_power_law(b), b, 1.0);
        for (double x : curve.v) {
            CHECK(std::abs(x - speed) < 1e-8 * speed);
        }
    }
}

TEST_CASE("spatial decay outside the cone") {
    const auto times = uniform_grid(1.0, 11);
    const auto f = synthetic(10, times, [](double r, double t) { return (0.1 + t) * std::exp(-r / 2.0); });
    LightConeBoundary none;
    none.threshold = 0.5;
    const auto fit = fit_spatial_decay(f, 0.5, none);
    CHECK(fit.form == FitForm::exponential);
    CHECK(std::abs(fit.params[1] - 2.0) < 1e-10);
    CHECK(fit.params[0] == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(fit.n_points == 9);

    // Separations 1..3 are inside the cone at t = 0.5.
    LightConeBoundary cone;
    cone.arrivals = {{1, 0.1, std::nullopt}, {2, 0.2, std::nullopt}, {3, 0.45, std::nullopt},
                     {4, 0.7, std::nullopt}};
    const auto p = outside_cone_profile(f, 0.5, cone);
    CHECK(p.r == std::vector<double>{4, 5, 6, 7, 8, 9});
    CHECK(p.c[0] == doctest::Approx(0.6 * std::exp(-2.0)));

    const auto pw = synthetic(10, times, [](double r, double) { return 0.3 * std::pow(r, -1.7); });
    const auto fp = fit_spatial_power_law(pw, 0.5, none);
    CHECK(fp.params[1] == doctest::Approx(1.7).epsilon(1e-10));
    CHECK(fit_spatial_decay(pw, 0.5, none).rms_residual > fp.rms_residual);

    const auto zero = synthetic(10, times, [](double, double) { return 0.0; });
    CHECK(code_of([&] { fit_spatial_decay(zero, 0.5, none); }) == ErrorCode::degenerate_fit);
    LightConeBoundary most;
    for (std::size_t r = 1; r <= 7; ++r) {
        most.arrivals.push_back({r, 0.1, std::nullopt});
    }
    CHECK(code_of([&] { fit_spatial_decay(f, 0.5, most); }) == ErrorCode::insufficient_data);
}

TEST_CASE("perturbative short-time law") {
    const auto J = CouplingMatrix::from_dense(2, {0, 0.5, 0.5, 0});
    CHECK(perturbative_xy(J, 0, 1, 0.0) == 0.0);
    CHECK(perturbative_xy(J, 0, 1, 0.1) == doctest::Approx(0.0025).epsilon(1e-14));

    const auto P = power_law_couplings(8, 1.0, 1.19);
    const Hamiltonian H(P, SpinModel::xy);
    const std::vector<double> times{0.0, 0.005, 0.01, 0.02, 0.5};
    const auto f = correlation_field(H, times);
    double worst_late = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = i + 1; j < 8; ++j) {
            auto ratio = [&](std::size_t k) { return f(i, j, k) / perturbative_xy(P, i, j, times[k]); };
            CHECK(std::abs(ratio(3) - 1.0) < 0.05);
            // Richardson extrapolation over h, h/2, h/4 to t -> 0.
            const double r0 = (8.0 * ratio(1) - 6.0 * ratio(2) + ratio(3)) / 3.0;
            CHECK(std::abs(r0 - 1.0) < 1e-3);
            worst_late = std::max(worst_late, std::abs(ratio(4) - 1.0));
        }
    }
    CHECK(worst_late > 0.1);
}

TEST_CASE("tail shape outside the cone of a long-range XY chain") {
    const Hamiltonian H(power_law_couplings(11, 1.0, 0.63), SpinModel::xy);
    const auto f = correlation_field(H, uniform_grid(1.0, 101));
    const auto cone = extract_light_cone(f, 0.15);
    // At t = 0.05 the tail still follows (J_ij t)^2, a power law with exponent 2 alpha.
    const auto first = fit_spatial_power_law(f, 0.05, cone);
    CHECK(std::abs(first.params[1] - 1.26) < 0.05);
    CHECK(first.rms_residual < fit_spatial_decay(f, 0.05, cone).rms_residual);
    // Later the tail bends over and an exponential describes it better.
    for (double t : {0.4, 0.5}) {
        CAPTURE(t);
        CHECK(fit_spatial_decay(f, t, cone).rms_residual <
              fit_spatial_power_law(f, t, cone).rms_residual);
    }
}

TEST_CASE("boundary and velocity CSV") {
    LightConeBoundary b;
    b.threshold = 0.04;
    b.arrivals = {{1, 0.5, std::make_pair(std::size_t{0}, std::size_t{1})}, {2, 0.75, std::nullopt}};
    std::ostringstream os;
    write_boundary_csv(os, b);
    CHECK(os.str() == "r,t_star,i,j,threshold,reduce\n1,0.5,1,2,0.040000000000000001,max\n"
                      "2,0.75,,,0.040000000000000001,max\n");
    VelocityCurve v{{1.0}, {2.0}, 3.0};
    std::ostringstream ov;
    write_velocity_csv(ov, v);
    CHECK(ov.str() == "r,v,v_lr\n1,2,3\n");
}
