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

#include <iomanip>
#include <ostream>

#include "lightcone/analysis.hpp"
#include "lightcone/error.hpp"

namespace lightcone::analysis {

double perturbative_xy(const CouplingMatrix &J, std::size_t i, std::size_t j, double t) {
    require(i < J.size() && j < J.size(), ErrorCode::index_out_of_range,
            "perturbative_xy: spin index out of range");
    const double x = J(i, j) * t;
    return x * x;
}

void write_boundary_csv(std::ostream &os, const LightConeBoundary &b) {
    os << "r,t_star,i,j,threshold,reduce\n" << std::setprecision(17);
    for (const auto &a : b.arrivals) {
        os << a.r << ',' << a.time << ',';
        if (a.source_pair) {
            os << a.source_pair->first + 1 << ',' << a.source_pair->second + 1;
        } else {
            os << ',';
        }
        os << ',' << b.threshold << ',' << to_string(b.reduce) << '\n';
    }
}

void write_velocity_csv(std::ostream &os, const VelocityCurve &v) {
    os << "r,v,v_lr\n" << std::setprecision(17);
    for (std::size_t k = 0; k < v.r.size(); ++k) {
        os << v.r[k] << ',' << v.v[k] << ',' << v.v_lr << '\n';
    }
}

} // namespace lightcone::analysis
