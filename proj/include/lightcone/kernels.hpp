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

#include <complex>
#include <cstddef>
#include <string_view>

namespace lightcone::kernels {

using cplx = std::complex<double>;

enum class SimdLevel { scalar, avx2 };

std::string_view to_string(SimdLevel level) noexcept;

/// Data-parallel inner loops of the state-vector engine. Every entry has a
/// scalar reference implementation; vector variants must agree with it to
/// rounding.
struct KernelTable {
    SimdLevel level;

    /// In-place butterfly (a, b) -> (a + b, a - b) over index pairs differing
    /// in `bit`. `len` must be a multiple of 2^(bit+1).
    void (*butterfly)(cplx *data, std::size_t len, unsigned bit);

    /// data[s] *= d[s]
    void (*scale_diagonal)(cplx *data, const double *d, std::size_t len);

    /// out[s] = d[s] * in[s] + add[s]
    void (*diagonal_fma)(cplx *out, const double *d, const cplx *in, const cplx *add,
                         std::size_t len);

    /// prev[s] = alpha * h[s] + beta * cur[s] - prev[s]
    /// (three-term Chebyshev recurrence; prev is overwritten with T_{k+1}).
    void (*chebyshev_next)(cplx *prev, const cplx *h, const cplx *cur, double alpha,
                           double beta, std::size_t len);

    /// acc[s] += c * v[s]
    void (*axpy)(cplx *acc, cplx c, const cplx *v, std::size_t len);

    /// out[s] += coeff * (Y_bit in)[s] with Y|0> = i|1>, Y|1> = -i|0> on that bit.
    void (*y_flip_accumulate)(cplx *out, const cplx *in, std::size_t len, unsigned bit,
                              double coeff);

    /// p[s] = |psi[s]|^2
    void (*abs2)(double *p, const cplx *psi, std::size_t len);
};

/// Highest level the running CPU supports (and the build includes).
SimdLevel detect_level() noexcept;
bool is_supported(SimdLevel level) noexcept;

/// Table for an explicit level; throws invalid_argument if unsupported.
const KernelTable &table(SimdLevel level);

/// Table selected once per process: detect_level(), overridable through the
/// LIGHTCONE_SIMD environment variable ("scalar" or "avx2").
const KernelTable &active();

namespace scalar {
const KernelTable &table() noexcept;
}
#if defined(LIGHTCONE_HAVE_AVX2)
namespace avx2 {
const KernelTable &table() noexcept;
}
#endif

} // namespace lightcone::kernels
