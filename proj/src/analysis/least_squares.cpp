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

#include <Eigen/Dense>

#include "lightcone/error.hpp"
#include "lightcone/least_squares.hpp"

namespace lightcone::fitting {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> weights) {
    const std::size_t n = x.size();
    require(n == y.size(), ErrorCode::invalid_argument, "linear_fit: x and y differ in length");
    require(weights.empty() || weights.size() == n, ErrorCode::invalid_argument,
            "linear_fit: weights differ in length");
    require(n >= 2, ErrorCode::insufficient_data, "linear_fit: need at least 2 points");

    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = weights.empty() ? 1.0 : weights[k];
        require(w > 0.0 && std::isfinite(w), ErrorCode::invalid_argument,
                "linear_fit: weights must be positive");
        sw += w;
        sx += w * x[k];
        sy += w * y[k];
    }
    const double mx = sx / sw;
    const double my = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = weights.empty() ? 1.0 : weights[k];
        sxx += w * (x[k] - mx) * (x[k] - mx);
        sxy += w * (x[k] - mx) * (y[k] - my);
    }
    require(sxx > 0.0, ErrorCode::degenerate_fit, "linear_fit: all x values coincide");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0, wss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = weights.empty() ? 1.0 : weights[k];
        const double res = y[k] - (fit.intercept + fit.slope * x[k]);
        ss += res * res;
        wss += w * res * res;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    if (n > 2) {
        const double s2 = wss / static_cast<double>(n - 2);
        fit.sigma_slope = std::sqrt(s2 / sxx);
        fit.sigma_intercept = std::sqrt(s2 * (1.0 / sw + mx * mx / sxx));
    }
    return fit;
}

NonlinearFit levenberg_marquardt(const Model &f, std::span<const double> x,
                                 std::span<const double> y, std::vector<double> p0,
                                 const LevenbergMarquardtOptions &opts) {
    const std::size_t n = x.size();
    const std::size_t np = p0.size();
    require(n == y.size(), ErrorCode::invalid_argument,
            "levenberg_marquardt: x and y differ in length");
    require(n >= np && np > 0, ErrorCode::insufficient_data,
            "levenberg_marquardt: fewer points than parameters");

    const auto N = static_cast<Eigen::Index>(n);
    const auto P = static_cast<Eigen::Index>(np);
    Eigen::MatrixXd jac(N, P);
    Eigen::VectorXd res(N);
    std::vector<double> grad(np);

    auto evaluate = [&](const std::vector<double> &p, bool with_jacobian) {
        double sse = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double fk = f(x[k], p, grad);
            const double r = y[k] - fk;
            sse += r * r;
            if (with_jacobian) {
                res[static_cast<Eigen::Index>(k)] = r;
                for (std::size_t q = 0; q < np; ++q) {
                    jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(q)) = grad[q];
                }
            }
        }
        return sse;
    };

    NonlinearFit out;
    std::vector<double> p = std::move(p0);
    double sse = evaluate(p, true);
    require(std::isfinite(sse), ErrorCode::degenerate_fit,
            "levenberg_marquardt: model is not finite at the starting point");
    double lambda = 1e-3;
    std::vector<double> trial(np);
    for (int it = 0; it < opts.max_iterations; ++it) {
        out.iterations = it + 1;
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * res;
        bool improved = false;
        double trial_sse = sse;
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::MatrixXd a = jtj;
            for (Eigen::Index q = 0; q < P; ++q) {
                a(q, q) += lambda * std::max(jtj(q, q), 1e-300);
            }
            const Eigen::VectorXd step = a.ldlt().solve(jtr);
            for (std::size_t q = 0; q < np; ++q) {
                trial[q] = p[q] + step[static_cast<Eigen::Index>(q)];
            }
            trial_sse = evaluate(trial, false);
            if (std::isfinite(trial_sse) && trial_sse <= sse) {
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) {
            out.converged = true; // no descent direction left at working precision
            break;
        }
        const double change = sse - trial_sse;
        p = trial;
        sse = evaluate(p, true);
        lambda = std::max(lambda / 10.0, 1e-12);
        if (change <= opts.relative_tolerance * std::max(sse, 1e-300) || sse == 0.0) {
            out.converged = true;
            break;
        }
    }

    out.params = p;
    out.rms_residual = std::sqrt(sse / static_cast<double>(n));
    out.sigmas.assign(np, 0.0);
    if (n > np) {
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
        if (lu.isInvertible()) {
            const Eigen::MatrixXd cov = lu.inverse() * (sse / static_cast<double>(n - np));
            for (std::size_t q = 0; q < np; ++q) {
                const double v = cov(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
                out.sigmas[q] = v > 0.0 ? std::sqrt(v) : 0.0;
            }
        }
    }
    return out;
}

} // namespace lightcone::fitting
