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

#include "lightcone/error.hpp"
#include "lightcone/evolution.hpp"
#include "lightcone/ising.hpp"

namespace lightcone {

CorrelationField::CorrelationField(std::size_t n_spins, std::vector<double> times,
                                   bool with_stderr)
    : n_(n_spins), times_(std::move(times)),
      values_(n_ * n_ * times_.size(), 0.0) {
    if (with_stderr) {
        stderr_.assign(values_.size(), 0.0);
    }
}

void CorrelationField::set_slice(std::size_t k, std::span<const double> matrix) {
    require(matrix.size() == n_ * n_ && k < times_.size(), ErrorCode::invalid_argument,
            "CorrelationField::set_slice: shape mismatch");
    std::copy(matrix.begin(), matrix.end(), values_.begin() + static_cast<std::ptrdiff_t>(k * n_ * n_));
}

// Split the basis index into `low` bits and the remaining high bits; pair
// sums within each half run on marginals, cross terms on per-block partials.
ZMoments z_moments(std::span<const double> probabilities, std::size_t n_spins) {
    const std::size_t dim = std::size_t{1} << n_spins;
    require(probabilities.size() == dim, ErrorCode::invalid_argument,
            "z_moments: distribution size does not match 2^N");
    const std::size_t low = n_spins / 2;
    const std::size_t high = n_spins - low;
    const std::size_t low_dim = std::size_t{1} << low;
    const std::size_t high_dim = std::size_t{1} << high;

    std::vector<double> low_marginal(low_dim, 0.0);
    std::vector<double> high_marginal(high_dim, 0.0);
    // cross[h * low + a] = sum_lo p(h, lo) [bit a of lo]
    std::vector<double> cross(high_dim * low, 0.0);
    for (std::size_t h = 0; h < high_dim; ++h) {
        const double *block = probabilities.data() + h * low_dim;
        double block_sum = 0.0;
        double *c = cross.data() + h * low;
        for (std::size_t lo = 0; lo < low_dim; ++lo) {
            const double p = block[lo];
            block_sum += p;
            low_marginal[lo] += p;
        }
        for (std::size_t a = 0; a < low; ++a) {
            const std::size_t half = std::size_t{1} << a;
            double s = 0.0;
            for (std::size_t base = half; base < low_dim; base += 2 * half) {
                for (std::size_t lo = base; lo < base + half; ++lo) {
                    s += block[lo];
                }
            }
            c[a] = s;
        }
        high_marginal[h] = block_sum;
    }

    ZMoments m;
    m.n = n_spins;
    m.up.assign(n_spins, 0.0);
    m.pair.assign(n_spins * n_spins, 0.0);
    auto pair = [&](std::size_t i, std::size_t j) -> double & { return m.pair[i * n_spins + j]; };

    for (std::size_t lo = 0; lo < low_dim; ++lo) {
        const double p = low_marginal[lo];
        for (std::size_t a = 0; a < low; ++a) {
            if (((lo >> a) & 1U) == 0) {
                continue;
            }
            m.up[a] += p;
            for (std::size_t b = a + 1; b < low; ++b) {
                if ((lo >> b) & 1U) {
                    pair(a, b) += p;
                }
            }
        }
    }
    for (std::size_t h = 0; h < high_dim; ++h) {
        const double p = high_marginal[h];
        const double *c = cross.data() + h * low;
        for (std::size_t a = 0; a < high; ++a) {
            if (((h >> a) & 1U) == 0) {
                continue;
            }
            const std::size_t ia = low + a;
            m.up[ia] += p;
            for (std::size_t b = a + 1; b < high; ++b) {
                if ((h >> b) & 1U) {
                    pair(ia, low + b) += p;
                }
            }
            for (std::size_t b = 0; b < low; ++b) {
                pair(b, ia) += c[b];
            }
        }
    }
    for (std::size_t i = 0; i < n_spins; ++i) {
        pair(i, i) = m.up[i];
        for (std::size_t j = i + 1; j < n_spins; ++j) {
            pair(j, i) = pair(i, j);
        }
    }
    return m;
}

std::vector<double> connected_zz(const ZMoments &m) {
    const std::size_t n = m.n;
    std::vector<double> c(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            c[i * n + j] = 4.0 * (m.pair[i * n + j] - m.up[i] * m.up[j]);
        }
    }
    return c;
}

namespace {

std::vector<double> probabilities_of(std::span<const cplx> psi,
                                     const kernels::KernelTable &table) {
    std::vector<double> p(psi.size());
    table.abs2(p.data(), psi.data(), psi.size());
    return p;
}

} // namespace

std::vector<double> correlation_matrix(std::span<const cplx> psi, std::size_t n_spins,
                                       const kernels::KernelTable &table) {
    return connected_zz(z_moments(probabilities_of(psi, table), n_spins));
}

std::vector<double> magnetizations(std::span<const cplx> psi, std::size_t n_spins,
                                   const kernels::KernelTable &table) {
    const ZMoments m = z_moments(probabilities_of(psi, table), n_spins);
    std::vector<double> z(n_spins);
    for (std::size_t i = 0; i < n_spins; ++i) {
        z[i] = 2.0 * m.up[i] - 1.0;
    }
    return z;
}

CorrelationField connected_correlations(const StateTrajectory &traj) {
    require(traj.states.size() == traj.times.size(), ErrorCode::invalid_argument,
            "connected_correlations: trajectory shape mismatch");
    CorrelationField field(traj.n_spins, traj.times);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        require(traj.states[k].size() == (std::size_t{1} << traj.n_spins),
                ErrorCode::invalid_argument, "connected_correlations: bad state size");
        field.set_slice(k, correlation_matrix(traj.states[k], traj.n_spins));
    }
    return field;
}

CorrelationField correlation_field(const Hamiltonian &H, std::span<const double> times,
                                   const EvolveOptions &opts) {
    CorrelationField field(H.n_spins(), std::vector<double>(times.begin(), times.end()));
    evolve_streaming(
        H, times,
        [&](std::size_t k, double, std::span<const cplx> psi) {
            field.set_slice(k, correlation_matrix(psi, H.n_spins(), H.kernels()));
        },
        opts);
    return field;
}

CorrelationField ising_correlation_field(const CouplingMatrix &J,
                                         std::span<const double> times) {
    const std::size_t n = J.size();
    CorrelationField field(n, std::vector<double>(times.begin(), times.end()));
    std::vector<double> slice(n * n);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double mi = ising::magnetization(J, i, times[k]);
            slice[i * n + i] = 1.0 - mi * mi;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double c = ising::correlation(J, i, j, times[k]);
                slice[i * n + j] = c;
                slice[j * n + i] = c;
            }
        }
        field.set_slice(k, slice);
    }
    return field;
}

} // namespace lightcone
