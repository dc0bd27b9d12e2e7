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
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lightcone/error.hpp"
#include "lightcone/model.hpp"

namespace lightcone {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::non_positive_coupling: return "non-positive-coupling";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::zigzag_instability: return "zigzag-instability";
    case ErrorCode::resonance: return "resonance";
    case ErrorCode::memory_cap: return "memory-cap";
    case ErrorCode::accuracy_failure: return "accuracy-failure";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::degenerate_fit: return "degenerate-fit";
    case ErrorCode::config_parse: return "config-parse";
    case ErrorCode::config_validation: return "config-validation";
    case ErrorCode::io: return "io";
    }
    return "unknown";
}

CouplingMatrix CouplingMatrix::from_dense(std::size_t n, std::vector<double> values) {
    require(n >= 2, ErrorCode::invalid_argument, "coupling matrix needs n >= 2");
    require(values.size() == n * n, ErrorCode::invalid_argument,
            "coupling matrix must have n*n entries");
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        require(values[i * n + i] == 0.0, ErrorCode::invalid_argument,
                "coupling matrix diagonal must be zero");
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = values[i * n + j];
            require(std::isfinite(a), ErrorCode::invalid_argument,
                    "coupling matrix entries must be finite");
            require(a == values[j * n + i], ErrorCode::invalid_argument,
                    "coupling matrix must be symmetric");
            max_abs = std::max(max_abs, std::abs(a));
        }
    }
    require(max_abs > 0.0, ErrorCode::invalid_argument,
            "coupling matrix has no nonzero coupling");
    return CouplingMatrix(n, std::move(values), max_abs);
}

CouplingMatrix CouplingMatrix::scaled(double factor) const {
    require(std::isfinite(factor) && factor != 0.0, ErrorCode::invalid_argument,
            "coupling scale factor must be finite and nonzero");
    std::vector<double> v(values_);
    for (double &x : v) {
        x *= factor;
    }
    return CouplingMatrix(n_, std::move(v), max_abs_ * std::abs(factor));
}

CouplingMatrix power_law_couplings(std::size_t n, double J0, double alpha) {
    require(n >= 2, ErrorCode::invalid_argument, "power_law_couplings: n must be >= 2");
    require(J0 > 0.0 && std::isfinite(J0), ErrorCode::invalid_argument,
            "power_law_couplings: J0 must be > 0");
    require(alpha >= 0.0 && std::isfinite(alpha), ErrorCode::invalid_argument,
            "power_law_couplings: alpha must be >= 0");
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = J0 / std::pow(static_cast<double>(j - i), alpha);
            v[i * n + j] = c;
            v[j * n + i] = c;
        }
    }
    return CouplingMatrix::from_dense(n, std::move(v));
}

CouplingMatrix nearest_neighbor_couplings(std::size_t n, double J) {
    require(n >= 2, ErrorCode::invalid_argument,
            "nearest_neighbor_couplings: n must be >= 2");
    require(J > 0.0 && std::isfinite(J), ErrorCode::invalid_argument,
            "nearest_neighbor_couplings: J must be > 0");
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        v[i * n + i + 1] = J;
        v[(i + 1) * n + i] = J;
    }
    return CouplingMatrix::from_dense(n, std::move(v));
}

namespace {

struct SourceBuilder {
    std::size_t n;

    CouplingMatrix operator()(const PowerLawSource &s) const {
        return power_law_couplings(n, s.J0, s.alpha);
    }
    CouplingMatrix operator()(const NearestNeighborSource &s) const {
        return nearest_neighbor_couplings(n, s.J);
    }
    CouplingMatrix operator()(const IonTrapParams &p) const {
        require(p.n_ions == n, ErrorCode::invalid_argument,
                "ion_trap n_ions does not match n_spins");
        return ion_trap_couplings(p);
    }
    CouplingMatrix operator()(const ExplicitSource &s) const {
        require(s.matrix.size() == n, ErrorCode::invalid_argument,
                "explicit coupling matrix must have n_spins rows");
        std::vector<double> v;
        v.reserve(n * n);
        for (const auto &row : s.matrix) {
            require(row.size() == n, ErrorCode::invalid_argument,
                    "explicit coupling matrix must be square");
            v.insert(v.end(), row.begin(), row.end());
        }
        return CouplingMatrix::from_dense(n, std::move(v));
    }
};

} // namespace

CouplingMatrix build_couplings(const ChainSpec &spec) {
    require(spec.n_spins >= 2, ErrorCode::invalid_argument, "n_spins must be >= 2");
    return std::visit(SourceBuilder{spec.n_spins}, spec.source);
}

void write_couplings_csv(std::ostream &os, const CouplingMatrix &J) {
    std::ostringstream buf;
    buf << std::setprecision(17);
    buf << "i,j,J\n";
    for (std::size_t i = 0; i < J.size(); ++i) {
        for (std::size_t j = 0; j < J.size(); ++j) {
            buf << i + 1 << ',' << j + 1 << ',' << J(i, j) << '\n';
        }
    }
    os << buf.str();
}

} // namespace lightcone
