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

#include "lightcone/analysis.hpp"
#include "lightcone/error.hpp"
#include "lightcone/least_squares.hpp"

namespace lightcone::analysis {

std::string_view to_string(FitForm f) noexcept {
    switch (f) {
    case FitForm::power_law:
        return "power_law";
    case FitForm::exponential:
        return "exponential";
    case FitForm::linear:
        return "linear";
    }
    return "unknown";
}

FitResult fit_boundary_power_law(const LightConeBoundary &b, std::span<const double> weights) {
    require(b.arrivals.size() >= 3, ErrorCode::insufficient_data,
            "fit_boundary_power_law: need at least 3 boundary points, got " +
                std::to_string(b.arrivals.size()));
    require(weights.empty() || weights.size() == b.arrivals.size(), ErrorCode::invalid_argument,
            "fit_boundary_power_law: weights differ in length from the boundary");
    std::vector<double> lr, lt;
    for (const auto &a : b.arrivals) {
        require(a.time > 0.0, ErrorCode::degenerate_fit,
                "fit_boundary_power_law: arrival at t = 0 for r = " + std::to_string(a.r));
        lr.push_back(std::log(static_cast<double>(a.r)));
        lt.push_back(std::log(a.time));
    }
    const auto lin = fitting::linear_fit(lr, lt, weights);
    FitResult out;
    out.form = FitForm::power_law;
    const double a = std::exp(lin.intercept);
    out.params = {a, lin.slope};
    out.sigmas = {a * lin.sigma_intercept, lin.sigma_slope};
    out.rms_residual = lin.rms_residual;
    out.window_lo = static_cast<double>(b.arrivals.front().r);
    out.window_hi = static_cast<double>(b.arrivals.back().r);
    out.n_points = b.arrivals.size();
    return out;
}

VelocityCurve propagation_velocity(const FitResult &fit, std::span<const double> r,
                                   double j_max) {
    require(fit.form == FitForm::power_law && fit.params.size() == 2,
            ErrorCode::invalid_argument, "propagation_velocity: needs a power-law fit");
    const double a = fit.params[0];
    const double beta = fit.params[1];
    require(beta > 0.0 && a > 0.0, ErrorCode::degenerate_fit,
            "propagation_velocity: boundary exponent must be > 0");
    VelocityCurve out;
    out.v_lr = 12.0 * std::numbers::e * j_max;
    for (double x : r) {
        out.r.push_back(x);
        out.v.push_back(std::pow(x, 1.0 - beta) / (a * beta));
    }
    return out;
}

VelocityCurve propagation_velocity(const FitResult &fit, const LightConeBoundary &b,
                                   double j_max) {
    std::vector<double> r;
    for (const auto &a : b.arrivals) {
        r.push_back(static_cast<double>(a.r));
    }
    return propagation_velocity(fit, r, j_max);
}

namespace {

double reduced_at(const CorrelationField &field, std::size_t r, double t, PairReduce reduce) {
    const auto times = field.times();
    if (t <= times.front()) {
        return reduce_pairs(field, r, 0, reduce).value;
    }
    if (t >= times.back()) {
        return reduce_pairs(field, r, times.size() - 1, reduce).value;
    }
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto k = static_cast<std::size_t>(it - times.begin());
    const double c0 = reduce_pairs(field, r, k - 1, reduce).value;
    const double c1 = reduce_pairs(field, r, k, reduce).value;
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return c0 + w * (c1 - c0);
}

// Seeds (A, s) from a log-linear fit of the positive points of y = A exp(s x).
std::pair<double, double> log_linear_seed(std::span<const double> x, std::span<const double> y,
                                          bool log_x) {
    std::vector<double> xs, ls;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (y[k] > 0.0) {
            xs.push_back(log_x ? std::log(x[k]) : x[k]);
            ls.push_back(std::log(y[k]));
        }
    }
    require(xs.size() >= 2, ErrorCode::degenerate_fit,
            "decay fit: fewer than 2 positive correlation values");
    const auto lin = fitting::linear_fit(xs, ls);
    return {std::exp(lin.intercept), lin.slope};
}

void check_profile(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorCode::invalid_argument,
            "decay fit: x and y differ in length");
    require(x.size() >= 3, ErrorCode::insufficient_data,
            "decay fit: need at least 3 separations outside the cone, got " +
                std::to_string(x.size()));
    require(std::any_of(y.begin(), y.end(), [](double v) { return v != 0.0; }),
            ErrorCode::degenerate_fit, "decay fit: correlations are identically zero");
}

} // namespace

DecayProfile outside_cone_profile(const CorrelationField &field, double t,
                                  const LightConeBoundary &boundary) {
    require(field.n_times() >= 1, ErrorCode::insufficient_data,
            "outside_cone_profile: empty field");
    DecayProfile out;
    for (std::size_t r = 1; r < field.n_spins(); ++r) {
        const auto ts = boundary.arrival(r);
        if (ts && t >= *ts) {
            continue;
        }
        out.r.push_back(static_cast<double>(r));
        out.c.push_back(reduced_at(field, r, t, boundary.reduce));
    }
    return out;
}

FitResult fit_exponential(std::span<const double> x, std::span<const double> y) {
    check_profile(x, y);
    const auto [a0, s0] = log_linear_seed(x, y, false);
    require(s0 < 0.0, ErrorCode::degenerate_fit, "fit_exponential: profile does not decay");
    const fitting::Model model = [](double r, std::span<const double> p, std::span<double> g) {
        const double e = std::exp(-r / p[1]);
        g[0] = e;
        g[1] = p[0] * e * r / (p[1] * p[1]);
        return p[0] * e;
    };
    const auto nl = fitting::levenberg_marquardt(model, x, y, {a0, -1.0 / s0});
    require(nl.params[1] > 0.0 && std::isfinite(nl.params[1]), ErrorCode::degenerate_fit,
            "fit_exponential: decay length is not positive");
    FitResult out;
    out.form = FitForm::exponential;
    out.params = nl.params;
    out.sigmas = nl.sigmas;
    out.rms_residual = nl.rms_residual;
    out.window_lo = *std::min_element(x.begin(), x.end());
    out.window_hi = *std::max_element(x.begin(), x.end());
    out.n_points = x.size();
    return out;
}

FitResult fit_power_decay(std::span<const double> x, std::span<const double> y) {
    check_profile(x, y);
    for (double r : x) {
        require(r > 0.0, ErrorCode::invalid_argument, "fit_power_decay: separations must be > 0");
    }
    const auto [a0, s0] = log_linear_seed(x, y, true);
    const fitting::Model model = [](double r, std::span<const double> p, std::span<double> g) {
        const double e = std::pow(r, -p[1]);
        g[0] = e;
        g[1] = -p[0] * e * std::log(r);
        return p[0] * e;
    };
    const auto nl = fitting::levenberg_marquardt(model, x, y, {a0, -s0});
    FitResult out;
    out.form = FitForm::power_law;
    out.params = nl.params;
    out.sigmas = nl.sigmas;
    out.rms_residual = nl.rms_residual;
    out.window_lo = *std::min_element(x.begin(), x.end());
    out.window_hi = *std::max_element(x.begin(), x.end());
    out.n_points = x.size();
    return out;
}

FitResult fit_spatial_decay(const CorrelationField &field, double t,
                            const LightConeBoundary &boundary) {
    const auto p = outside_cone_profile(field, t, boundary);
    return fit_exponential(p.r, p.c);
}

FitResult fit_spatial_power_law(const CorrelationField &field, double t,
                                const LightConeBoundary &boundary) {
    const auto p = outside_cone_profile(field, t, boundary);
    return fit_power_decay(p.r, p.c);
}

} // namespace lightcone::analysis
