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
#include <string>

#include "lightcone/error.hpp"
#include "lightcone/ising.hpp"

namespace lightcone::ising {

namespace {

void check_site(const CouplingMatrix &J, std::size_t i, const char *name) {
    if (i >= J.size()) {
        fail(ErrorCode::index_out_of_range, std::string("site ") + name + "=" +
                                                std::to_string(i) + " out of range for N=" +
                                                std::to_string(J.size()));
    }
}

void check_time(double t) {
    require(t >= 0.0 && std::isfinite(t), ErrorCode::invalid_argument,
            "time must be finite and >= 0");
}

} // namespace

double correlation(const CouplingMatrix &J, std::size_t i, std::size_t j, double t) {
    check_site(J, i, "i");
    check_site(J, j, "j");
    require(i != j, ErrorCode::invalid_argument, "correlation requires i != j");
    check_time(t);

    const std::size_t n = J.size();
    double sum_term = 1.0;
    double diff_term = 1.0;
    double single_i = 1.0;
    double single_j = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k != i) {
            single_i *= std::cos(2.0 * J(i, k) * t);
        }
        if (k != j) {
            single_j *= std::cos(2.0 * J(j, k) * t);
        }
        if (k == i || k == j) {
            continue;
        }
        sum_term *= std::cos(2.0 * (J(i, k) + J(j, k)) * t);
        diff_term *= std::cos(2.0 * (J(i, k) - J(j, k)) * t);
    }
    return 0.5 * sum_term + 0.5 * diff_term - single_i * single_j;
}

double magnetization(const CouplingMatrix &J, std::size_t i, double t) {
    check_site(J, i, "i");
    check_time(t);
    double p = 1.0;
    for (std::size_t k = 0; k < J.size(); ++k) {
        if (k != i) {
            p *= std::cos(2.0 * J(i, k) * t);
        }
    }
    return -p;
}

double mean_nearest_neighbor_correlation(const CouplingMatrix &J, double t) {
    const std::size_t n = J.size();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        s += std::abs(correlation(J, i, i + 1, t));
    }
    return s / static_cast<double>(n - 1);
}

SupportSets multi_hop_support(const CouplingMatrix &J, std::size_t i, std::size_t j) {
    check_site(J, i, "i");
    check_site(J, j, "j");
    require(i != j, ErrorCode::invalid_argument, "multi_hop_support requires i != j");

    SupportSets s;
    const std::size_t n = J.size();
    for (std::size_t p = 0; p < n; ++p) {
        if (p == i || J(i, p) != 0.0) {
            s.lambda_i.push_back(p);
        }
        if (p == j || J(j, p) != 0.0) {
            s.lambda_j.push_back(p);
        }
    }
    s.can_correlate = J(i, j) != 0.0;
    for (std::size_t k = 0; k < n && !s.can_correlate; ++k) {
        s.can_correlate = J(i, k) != 0.0 && J(j, k) != 0.0;
    }
    return s;
}

} // namespace lightcone::ising
