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

#include "lightcone/error.hpp"
#include "lightcone/model.hpp"

namespace lightcone {

std::vector<double> separation_means(const CouplingMatrix &J) {
    const std::size_t n = J.size();
    std::vector<double> means(n - 1, 0.0);
    for (std::size_t r = 1; r < n; ++r) {
        double sum = 0.0;
        for (std::size_t i = 0; i + r < n; ++i) {
            sum += J(i, i + r);
        }
        means[r - 1] = sum / static_cast<double>(n - r);
    }
    return means;
}

PowerLawFit fit_power_law(const CouplingMatrix &J) {
    const std::size_t n = J.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(J(i, j) > 0.0)) {
                fail(ErrorCode::non_positive_coupling,
                     "fit_power_law: coupling (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) +
                         ") is not positive; the matrix is not a power law");
            }
        }
    }
    const std::vector<double> means = separation_means(J);
    const std::size_t m = means.size();

    // Two couplings at separation 1 only (n = 2): a single point has no slope.
    if (m == 1) {
        return {means[0], 0.0, 0.0};
    }

    double sx = 0.0, sy = 0.0;
    std::vector<double> x(m), y(m);
    for (std::size_t k = 0; k < m; ++k) {
        x[k] = std::log(static_cast<double>(k + 1));
        y[k] = std::log(means[k]);
        sx += x[k];
        sy += y[k];
    }
    const double mx = sx / static_cast<double>(m);
    const double my = sy / static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    double ss = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double res = y[k] - (intercept + slope * x[k]);
        ss += res * res;
    }
    return {std::exp(intercept), -slope, std::sqrt(ss / static_cast<double>(m))};
}

} // namespace lightcone
