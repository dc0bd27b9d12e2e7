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

namespace lightcone {

ShotSampler::ShotSampler(std::size_t n_spins, std::size_t n_shots, std::uint64_t seed)
    : rng_(seed) {
    require(n_shots >= 1, ErrorCode::invalid_argument, "sample_measurements: n_shots must be >= 1");
    require(n_spins >= 1 && n_spins <= kMaxStateVectorSpins, ErrorCode::invalid_argument,
            "sample_measurements: unsupported number of spins");
    record_.n_spins = n_spins;
    record_.n_shots = n_shots;
    record_.seed = seed;
}

void ShotSampler::sample(double time, std::span<const cplx> psi,
                         const kernels::KernelTable &table) {
    const std::size_t dim = std::size_t{1} << record_.n_spins;
    require(psi.size() == dim, ErrorCode::invalid_argument,
            "sample_measurements: state size does not match 2^N");
    probs_.resize(dim);
    cdf_.resize(dim);
    table.abs2(probs_.data(), psi.data(), dim);
    double running = 0.0;
    for (std::size_t s = 0; s < dim; ++s) {
        running += probs_[s];
        cdf_[s] = running;
    }
    const double total = running;

    record_.times.push_back(time);
    record_.outcomes.reserve(record_.outcomes.size() + record_.n_shots);
    for (std::size_t shot = 0; shot < record_.n_shots; ++shot) {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53 * total;
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), dim - 1);
        record_.outcomes.push_back(static_cast<std::uint32_t>(idx));
    }
}

ShotRecord sample_measurements(const StateTrajectory &traj, std::size_t n_shots,
                               std::uint64_t seed) {
    ShotSampler sampler(traj.n_spins, n_shots, seed);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        sampler.sample(traj.times[k], traj.states[k]);
    }
    return sampler.take();
}

CorrelationField correlations_from_shots(const ShotRecord &shots) {
    require(shots.n_shots >= 2, ErrorCode::insufficient_data,
            "correlations_from_shots: at least 2 shots are required");
    require(shots.outcomes.size() == shots.n_shots * shots.times.size(),
            ErrorCode::invalid_argument, "correlations_from_shots: malformed shot record");

    const std::size_t n = shots.n_spins;
    const double ns = static_cast<double>(shots.n_shots);
    CorrelationField field(n, shots.times, true);
    std::vector<std::size_t> up(n);
    std::vector<std::size_t> both(n * n);

    for (std::size_t k = 0; k < shots.times.size(); ++k) {
        std::fill(up.begin(), up.end(), 0);
        std::fill(both.begin(), both.end(), 0);
        for (std::size_t s = 0; s < shots.n_shots; ++s) {
            const std::uint32_t bits = shots.outcome(k, s);
            for (std::size_t i = 0; i < n; ++i) {
                if (((bits >> i) & 1U) == 0) {
                    continue;
                }
                ++up[i];
                for (std::size_t j = i + 1; j < n; ++j) {
                    if ((bits >> j) & 1U) {
                        ++both[i * n + j];
                    }
                }
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const double ui = static_cast<double>(up[i]);
                const double uj = static_cast<double>(up[j]);
                const double uij = i == j ? ui : static_cast<double>(both[i * n + j]);
                const double si = 2.0 * ui - ns;
                const double sj = 2.0 * uj - ns;
                const double sij = ns - 2.0 * (ui + uj - 2.0 * uij);
                const double estimate = sij / ns - (si / ns) * (sj / ns);

                // Leave-one-out values depend only on the dropped shot's (z_i, z_j).
                const double counts[4] = {uij, ui - uij, uj - uij, ns - ui - uj + uij};
                const double zi[4] = {1.0, 1.0, -1.0, -1.0};
                const double zj[4] = {1.0, -1.0, 1.0, -1.0};
                double loo[4];
                double loo_mean = 0.0;
                for (int c = 0; c < 4; ++c) {
                    const double m = ns - 1.0;
                    loo[c] = (sij - zi[c] * zj[c]) / m - ((si - zi[c]) / m) * ((sj - zj[c]) / m);
                    loo_mean += counts[c] * loo[c];
                }
                loo_mean /= ns;
                double ss = 0.0;
                for (int c = 0; c < 4; ++c) {
                    ss += counts[c] * (loo[c] - loo_mean) * (loo[c] - loo_mean);
                }
                const double se = std::sqrt((ns - 1.0) / ns * ss);

                field.set(i, j, k, estimate);
                field.set(j, i, k, estimate);
                field.set_stderr(i, j, k, se);
                field.set_stderr(j, i, k, se);
            }
        }
    }
    return field;
}

} // namespace lightcone
