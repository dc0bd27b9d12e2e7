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

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lightcone::fitting {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double sigma_slope = 0.0;
    double sigma_intercept = 0.0;
    double rms_residual = 0.0;
};

/// Weighted straight-line least squares. Uncertainties scale the inverse
/// normal matrix by the residual variance with n - 2 degrees of freedom
/// (zero when n == 2).
LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> weights = {});

/// y = f(x; p) with analytic Jacobian row df/dp written into `grad`.
using Model = std::function<double(double x, std::span<const double> p, std::span<double> grad)>;

struct NonlinearFit {
    std::vector<double> params;
    std::vector<double> sigmas;
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct LevenbergMarquardtOptions {
    int max_iterations = 200;
    double relative_tolerance = 1e-14;
};

/// Levenberg-Marquardt on unweighted residuals y - f(x; p).
NonlinearFit levenberg_marquardt(const Model &f, std::span<const double> x,
                                 std::span<const double> y, std::vector<double> p0,
                                 const LevenbergMarquardtOptions &opts = {});

} // namespace lightcone::fitting
