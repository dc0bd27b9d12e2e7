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

#include <boost/math/special_functions/bessel.hpp>

#include "lightcone/error.hpp"
#include "lightcone/evolution.hpp"

namespace lightcone {

std::vector<double> uniform_grid(double t_max, std::size_t n_points) {
    require(n_points >= 2, ErrorCode::invalid_argument, "time grid needs >= 2 points");
    require(t_max > 0.0 && std::isfinite(t_max), ErrorCode::invalid_argument,
            "time grid t_max must be > 0");
    std::vector<double> t(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        t[k] = t_max * static_cast<double>(k) / static_cast<double>(n_points - 1);
    }
    return t;
}

namespace {

constexpr std::size_t kMaxChebyshevDegree = 2'000'000;

void check_times(std::span<const double> times) {
    require(!times.empty(), ErrorCode::invalid_argument, "evolve: empty time grid");
    require(times[0] == 0.0, ErrorCode::invalid_argument, "evolve: times[0] must be 0");
    for (std::size_t k = 1; k < times.size(); ++k) {
        require(times[k] > times[k - 1] && std::isfinite(times[k]),
                ErrorCode::invalid_argument, "evolve: times must be strictly increasing");
    }
}

double norm_of(std::span<const cplx> psi) {
    double s = 0.0;
    for (const cplx &a : psi) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

void check_norm(std::span<const cplx> psi, double time, const EvolveOptions &opts) {
    const double nrm = norm_of(psi);
    if (!(std::abs(nrm - 1.0) <= opts.norm_tolerance)) {
        fail(ErrorCode::accuracy_failure,
             "evolve: norm " + std::to_string(nrm) + " at t=" + std::to_string(time) +
                 " violates the tolerance");
    }
}

// Exact propagation of the pure Ising chain: in the Hadamard basis the
// Hamiltonian is diagonal and the initial state is uniform.
void evolve_diagonal(const Hamiltonian &H, std::span<const double> times,
                     const SnapshotCallback &on_snapshot, const EvolveOptions &opts) {
    const std::size_t dim = H.dimension();
    const auto energies = H.x_energies();
    const double amp = 1.0 / static_cast<double>(dim);
    std::vector<cplx> psi(dim);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        for (std::size_t s = 0; s < dim; ++s) {
            const double phase = -energies[s] * t;
            psi[s] = cplx{amp * std::cos(phase), amp * std::sin(phase)};
        }
        walsh_hadamard(psi, H.kernels());
        check_norm(psi, t, opts);
        on_snapshot(k, t, psi);
    }
}

// Chebyshev expansion of exp(-i H tau) on the spectral interval [b - a, b + a]:
//   exp(-i H tau) = exp(-i b tau) sum_k (2 - delta_k0) (-i)^k J_k(a tau) T_k(Hs)
// with Hs = (H - b) / a. One expansion serves several snapshot offsets.
class ChebyshevPropagator {
  public:
    ChebyshevPropagator(const Hamiltonian &H, const EvolveOptions &opts)
        : H_(H), opts_(opts), dim_(H.dimension()) {
        const auto [lo, hi] = H.spectral_bounds();
        center_ = 0.5 * (hi + lo);
        half_width_ = 0.5 * (hi - lo);
        half_width_ += 1e-12 * std::max(1.0, std::abs(hi) + std::abs(lo));
        prev_.resize(dim_);
        cur_.resize(dim_);
        h_.resize(dim_);
        scratch_.resize(dim_);
    }

    /// Replaces outputs[m] with exp(-i H offsets[m]) psi.
    void propagate(std::span<const cplx> psi, std::span<const double> offsets,
                   std::vector<std::vector<cplx>> &outputs) {
        const std::size_t m_count = offsets.size();
        const double x_max = half_width_ * offsets.back();
        const std::size_t degree = degree_for(x_max);

        std::vector<std::vector<cplx>> coeffs(m_count, std::vector<cplx>(degree + 1));
        for (std::size_t m = 0; m < m_count; ++m) {
            const double x = half_width_ * offsets[m];
            const cplx shift = std::polar(1.0, -center_ * offsets[m]);
            cplx minus_i_pow{1.0, 0.0};
            for (std::size_t k = 0; k <= degree; ++k) {
                const double bessel = boost::math::cyl_bessel_j(static_cast<double>(k), x);
                coeffs[m][k] = (k == 0 ? 1.0 : 2.0) * bessel * minus_i_pow * shift;
                minus_i_pow *= cplx{0.0, -1.0};
            }
        }

        const kernels::KernelTable &kt = H_.kernels();
        for (std::size_t m = 0; m < m_count; ++m) {
            outputs[m].resize(dim_);
            for (std::size_t s = 0; s < dim_; ++s) {
                outputs[m][s] = coeffs[m][0] * psi[s];
            }
        }
        if (degree == 0) {
            return;
        }

        std::copy(psi.begin(), psi.end(), cur_.begin());
        std::fill(prev_.begin(), prev_.end(), cplx{0.0, 0.0});
        const double inv_a = 1.0 / half_width_;
        // T_1 = (H - b) psi / a, written into prev_ then swapped into cur_.
        H_.apply(cur_, h_, scratch_);
        kt.chebyshev_next(prev_.data(), h_.data(), cur_.data(), inv_a, -center_ * inv_a, dim_);
        std::swap(prev_, cur_);
        for (std::size_t m = 0; m < m_count; ++m) {
            kt.axpy(outputs[m].data(), coeffs[m][1], cur_.data(), dim_);
        }
        for (std::size_t k = 2; k <= degree; ++k) {
            H_.apply(cur_, h_, scratch_);
            kt.chebyshev_next(prev_.data(), h_.data(), cur_.data(), 2.0 * inv_a,
                              -2.0 * center_ * inv_a, dim_);
            std::swap(prev_, cur_);
            for (std::size_t m = 0; m < m_count; ++m) {
                kt.axpy(outputs[m].data(), coeffs[m][k], cur_.data(), dim_);
            }
        }
    }

  private:
    std::size_t degree_for(double x) const {
        if (x == 0.0) {
            return 0;
        }
        // J_k(x) decays faster than geometrically once k exceeds x.
        std::size_t k = static_cast<std::size_t>(std::ceil(x));
        while (true) {
            if (k > kMaxChebyshevDegree) {
                fail(ErrorCode::accuracy_failure,
                     "evolve: Chebyshev degree limit exceeded; refine the time grid");
            }
            const double a0 = std::abs(boost::math::cyl_bessel_j(static_cast<double>(k), x));
            const double a1 = std::abs(boost::math::cyl_bessel_j(static_cast<double>(k + 1), x));
            if (a0 < opts_.truncation && a1 < opts_.truncation) {
                return k + 1;
            }
            ++k;
        }
    }

    const Hamiltonian &H_;
    const EvolveOptions &opts_;
    std::size_t dim_;
    double center_ = 0.0;
    double half_width_ = 0.0;
    std::vector<cplx> prev_, cur_, h_, scratch_;
};

void evolve_chebyshev(const Hamiltonian &H, std::span<const double> times,
                      const SnapshotCallback &on_snapshot, const EvolveOptions &opts) {
    const std::size_t dim = H.dimension();
    const std::size_t state_bytes = dim * sizeof(cplx);
    // Five working vectors besides the per-snapshot accumulators.
    const std::size_t budget_states = opts.memory_budget_bytes / state_bytes;
    const std::size_t chunk =
        std::clamp<std::size_t>(budget_states > 5 ? budget_states - 5 : 1, 1,
                                std::max<std::size_t>(1, opts.max_snapshots_per_expansion));

    std::vector<cplx> psi = all_down_state(H.n_spins());
    double t_cur = 0.0;
    std::size_t k = 0;
    on_snapshot(k++, 0.0, psi);

    ChebyshevPropagator prop(H, opts);
    std::vector<std::vector<cplx>> outputs(chunk);
    std::vector<double> offsets;
    while (k < times.size()) {
        const std::size_t count = std::min(chunk, times.size() - k);
        offsets.assign(count, 0.0);
        for (std::size_t m = 0; m < count; ++m) {
            offsets[m] = times[k + m] - t_cur;
        }
        prop.propagate(psi, offsets, outputs);
        for (std::size_t m = 0; m < count; ++m) {
            check_norm(outputs[m], times[k + m], opts);
            on_snapshot(k + m, times[k + m], outputs[m]);
        }
        std::swap(psi, outputs[count - 1]);
        t_cur = times[k + count - 1];
        k += count;
    }
}

} // namespace

void evolve_streaming(const Hamiltonian &H, std::span<const double> times,
                      const SnapshotCallback &on_snapshot, const EvolveOptions &opts) {
    check_times(times);
    PropagationMethod method = opts.method;
    if (method == PropagationMethod::automatic) {
        method = H.model() == SpinModel::ising ? PropagationMethod::diagonal
                                               : PropagationMethod::chebyshev;
    }
    if (method == PropagationMethod::diagonal) {
        require(H.model() == SpinModel::ising, ErrorCode::invalid_argument,
                "evolve: diagonal propagation applies only to the pure Ising model");
        evolve_diagonal(H, times, on_snapshot, opts);
        return;
    }
    evolve_chebyshev(H, times, on_snapshot, opts);
}

StateTrajectory evolve(const Hamiltonian &H, std::span<const double> times,
                       const EvolveOptions &opts) {
    const std::size_t bytes = H.dimension() * sizeof(cplx) * times.size();
    require(bytes <= opts.max_trajectory_bytes, ErrorCode::memory_cap,
            "evolve: trajectory would need " + std::to_string(bytes >> 20) +
                " MiB; use evolve_streaming or correlation_field");
    StateTrajectory traj;
    traj.n_spins = H.n_spins();
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(times.size());
    evolve_streaming(
        H, times,
        [&](std::size_t, double, std::span<const cplx> psi) {
            traj.states.emplace_back(psi.begin(), psi.end());
            traj.norms.push_back(norm_of(psi));
        },
        opts);
    return traj;
}

} // namespace lightcone
