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

std::string_view to_string(SpinModel model) noexcept {
    switch (model) {
    case SpinModel::ising: return "ising";
    case SpinModel::xy: return "xy";
    case SpinModel::ising_field: return "ising_field";
    }
    return "unknown";
}

std::vector<double> pair_energies(const CouplingMatrix &c, double scale) {
    const std::size_t n = c.size();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> energy(dim);
    double all_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            all_plus += scale * c(i, j);
        }
    }
    energy[0] = all_plus;

    // Flipping spin k from +1 to -1 changes the energy by -2 sum_j c_kj s_j.
    // States in [2^k, 2^(k+1)) have spins above k at +1.
    std::vector<double> local(dim / 2);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t block = std::size_t{1} << k;
        double upper = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) {
            upper += scale * c(k, j);
        }
        double lower_all_plus = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            lower_all_plus += scale * c(k, j);
        }
        local[0] = lower_all_plus;
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t width = std::size_t{1} << j;
            const double flip = 2.0 * scale * c(k, j);
            for (std::size_t s = 0; s < width; ++s) {
                local[width + s] = local[s] - flip;
            }
        }
        for (std::size_t s = 0; s < block; ++s) {
            energy[block + s] = energy[s] - 2.0 * (local[s] + upper);
        }
    }
    return energy;
}

void walsh_hadamard(std::span<cplx> data, const kernels::KernelTable &table) {
    const std::size_t len = data.size();
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < len) {
        ++bits;
    }
    // Low bits are done tile by tile so each tile stays in cache.
    constexpr unsigned kTileBits = 11;
    const unsigned tile_bits = std::min(bits, kTileBits);
    const std::size_t tile = std::size_t{1} << tile_bits;
    const auto n_tiles = static_cast<std::ptrdiff_t>(len / tile);
#pragma omp parallel for schedule(static) if (n_tiles >= 8)
    for (std::ptrdiff_t t = 0; t < n_tiles; ++t) {
        cplx *p = data.data() + static_cast<std::size_t>(t) * tile;
        for (unsigned b = 0; b < tile_bits; ++b) {
            table.butterfly(p, tile, b);
        }
    }
    for (unsigned b = tile_bits; b < bits; ++b) {
        table.butterfly(data.data(), len, b);
    }
}

std::vector<cplx> all_down_state(std::size_t n_spins) {
    std::vector<cplx> psi(std::size_t{1} << n_spins, cplx{0.0, 0.0});
    psi[0] = 1.0;
    return psi;
}

Hamiltonian::Hamiltonian(CouplingMatrix J, SpinModel model, double field,
                         const kernels::KernelTable *table)
    : J_(std::move(J)), model_(model), field_(field),
      table_(table != nullptr ? table : &kernels::active()) {
    const std::size_t n = J_.size();
    require(n >= 2, ErrorCode::invalid_argument, "Hamiltonian needs at least 2 spins");
    require(n <= kMaxStateVectorSpins, ErrorCode::memory_cap,
            "state-vector evolution is capped at " + std::to_string(kMaxStateVectorSpins) +
                " spins (got " + std::to_string(n) + ")");
    require(std::isfinite(field), ErrorCode::invalid_argument, "field must be finite");
    require(model == SpinModel::ising_field || field == 0.0, ErrorCode::invalid_argument,
            "a transverse field B != 0 requires the ising_field model");

    const double pair_scale = model == SpinModel::xy ? 0.5 : 1.0;
    x_energy_ = pair_energies(J_, pair_scale);
    const double inv_dim = 1.0 / static_cast<double>(dimension());
    x_diag_scaled_.resize(x_energy_.size());
    for (std::size_t s = 0; s < x_energy_.size(); ++s) {
        x_diag_scaled_[s] = x_energy_[s] * inv_dim;
    }

    const auto [xmin, xmax] = std::minmax_element(x_energy_.begin(), x_energy_.end());
    double lo = *xmin;
    double hi = *xmax;
    if (model == SpinModel::xy) {
        // The z-z part has the same coefficients and hence the same spectrum.
        z_diag_ = x_energy_;
        lo += *xmin;
        hi += *xmax;
    } else if (model == SpinModel::ising_field) {
        const double spread = static_cast<double>(n) * std::abs(field_);
        lo -= spread;
        hi += spread;
    }
    bounds_ = {lo, hi};
}

void Hamiltonian::apply(std::span<const cplx> in, std::span<cplx> out,
                        std::span<cplx> scratch) const {
    const std::size_t dim = dimension();
    require(in.size() == dim && out.size() == dim && scratch.size() == dim,
            ErrorCode::invalid_argument, "Hamiltonian::apply: vector size mismatch");
    const kernels::KernelTable &k = *table_;

    std::copy(in.begin(), in.end(), scratch.begin());
    walsh_hadamard(scratch, k);
    k.scale_diagonal(scratch.data(), x_diag_scaled_.data(), dim);
    walsh_hadamard(scratch, k);

    if (model_ == SpinModel::xy) {
        k.diagonal_fma(out.data(), z_diag_.data(), in.data(), scratch.data(), dim);
        return;
    }
    std::copy(scratch.begin(), scratch.end(), out.begin());
    if (model_ == SpinModel::ising_field && field_ != 0.0) {
        // Bit value 0 is spin down, so sigma^y = -Y in the kernel's bit basis.
        for (unsigned bit = 0; bit < n_spins(); ++bit) {
            k.y_flip_accumulate(out.data(), in.data(), dim, bit, -field_);
        }
    }
}

void Hamiltonian::apply(std::span<const cplx> in, std::span<cplx> out) const {
    std::vector<cplx> scratch(dimension());
    apply(in, out, scratch);
}

Hamiltonian build_hamiltonian(const CouplingMatrix &J, SpinModel model, double field) {
    return Hamiltonian(J, model, field);
}

double energy(const Hamiltonian &H, std::span<const cplx> psi) {
    std::vector<cplx> h(H.dimension());
    H.apply(psi, h);
    double e = 0.0;
    for (std::size_t s = 0; s < h.size(); ++s) {
        e += (std::conj(psi[s]) * h[s]).real();
    }
    return e;
}

} // namespace lightcone
