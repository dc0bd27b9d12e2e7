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

#include "lightcone/kernels.hpp"

namespace lightcone::kernels::scalar {
namespace {

void butterfly(cplx *data, std::size_t len, unsigned bit) {
    const std::size_t half = std::size_t{1} << bit;
    for (std::size_t base = 0; base < len; base += 2 * half) {
        for (std::size_t k = base; k < base + half; ++k) {
            const cplx a = data[k];
            const cplx b = data[k + half];
            data[k] = a + b;
            data[k + half] = a - b;
        }
    }
}

void scale_diagonal(cplx *data, const double *d, std::size_t len) {
    for (std::size_t s = 0; s < len; ++s) {
        data[s] *= d[s];
    }
}

void diagonal_fma(cplx *out, const double *d, const cplx *in, const cplx *add,
                  std::size_t len) {
    for (std::size_t s = 0; s < len; ++s) {
        out[s] = d[s] * in[s] + add[s];
    }
}

void chebyshev_next(cplx *prev, const cplx *h, const cplx *cur, double alpha,
                    double beta, std::size_t len) {
    for (std::size_t s = 0; s < len; ++s) {
        prev[s] = alpha * h[s] + beta * cur[s] - prev[s];
    }
}

void axpy(cplx *acc, cplx c, const cplx *v, std::size_t len) {
    for (std::size_t s = 0; s < len; ++s) {
        acc[s] += c * v[s];
    }
}

// sigma^y|0> = i|1>, sigma^y|1> = -i|0>.
void y_flip_accumulate(cplx *out, const cplx *in, std::size_t len, unsigned bit,
                       double coeff) {
    const std::size_t half = std::size_t{1} << bit;
    const cplx up{0.0, coeff};
    for (std::size_t base = 0; base < len; base += 2 * half) {
        for (std::size_t k = base; k < base + half; ++k) {
            out[k] -= up * in[k + half];
            out[k + half] += up * in[k];
        }
    }
}

void abs2(double *p, const cplx *psi, std::size_t len) {
    for (std::size_t s = 0; s < len; ++s) {
        p[s] = psi[s].real() * psi[s].real() + psi[s].imag() * psi[s].imag();
    }
}

constexpr KernelTable kTable{
    SimdLevel::scalar, butterfly, scale_diagonal, diagonal_fma, chebyshev_next,
    axpy,              y_flip_accumulate,          abs2,
};

} // namespace

const KernelTable &table() noexcept { return kTable; }

} // namespace lightcone::kernels::scalar
