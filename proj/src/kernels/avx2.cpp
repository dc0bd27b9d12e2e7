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

#include <immintrin.h>

#include "lightcone/kernels.hpp"

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
// A __m256d holds two interleaved complex<double> values [re0, im0, re1, im1].

namespace lightcone::kernels::avx2 {
namespace {

inline double *raw(cplx *p) { return reinterpret_cast<double *>(p); }
inline const double *raw(const cplx *p) { return reinterpret_cast<const double *>(p); }

// [d0, d0, d1, d1] from two consecutive reals.
inline __m256d broadcast_pair(const double *d) {
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(d)), 0x50);
}

void butterfly(cplx *data, std::size_t len, unsigned bit) {
    if (bit == 0) {
        double *p = raw(data);
        for (std::size_t k = 0; k + 1 < len; k += 2) {
            const __m256d x = _mm256_loadu_pd(p + 2 * k);
            const __m256d y = _mm256_permute2f128_pd(x, x, 0x01);
            const __m256d s = _mm256_add_pd(x, y);
            const __m256d d = _mm256_sub_pd(x, y);
            _mm256_storeu_pd(p + 2 * k, _mm256_permute2f128_pd(s, d, 0x20));
        }
        return;
    }
    const std::size_t half = std::size_t{1} << bit;
    double *p = raw(data);
    for (std::size_t base = 0; base < len; base += 2 * half) {
        double *lo = p + 2 * base;
        double *hi = p + 2 * (base + half);
        for (std::size_t k = 0; k < 2 * half; k += 4) {
            const __m256d a = _mm256_loadu_pd(lo + k);
            const __m256d b = _mm256_loadu_pd(hi + k);
            _mm256_storeu_pd(lo + k, _mm256_add_pd(a, b));
            _mm256_storeu_pd(hi + k, _mm256_sub_pd(a, b));
        }
    }
}

void scale_diagonal(cplx *data, const double *d, std::size_t len) {
    double *p = raw(data);
    std::size_t s = 0;
    for (; s + 2 <= len; s += 2) {
        const __m256d v = _mm256_loadu_pd(p + 2 * s);
        _mm256_storeu_pd(p + 2 * s, _mm256_mul_pd(broadcast_pair(d + s), v));
    }
    for (; s < len; ++s) {
        data[s] *= d[s];
    }
}

void diagonal_fma(cplx *out, const double *d, const cplx *in, const cplx *add,
                  std::size_t len) {
    double *o = raw(out);
    const double *x = raw(in);
    const double *a = raw(add);
    std::size_t s = 0;
    for (; s + 2 <= len; s += 2) {
        const __m256d v = _mm256_fmadd_pd(broadcast_pair(d + s), _mm256_loadu_pd(x + 2 * s),
                                          _mm256_loadu_pd(a + 2 * s));
        _mm256_storeu_pd(o + 2 * s, v);
    }
    for (; s < len; ++s) {
        out[s] = d[s] * in[s] + add[s];
    }
}

void chebyshev_next(cplx *prev, const cplx *h, const cplx *cur, double alpha,
                    double beta, std::size_t len) {
    double *p = raw(prev);
    const double *hp = raw(h);
    const double *cp = raw(cur);
    const __m256d va = _mm256_set1_pd(alpha);
    const __m256d vb = _mm256_set1_pd(beta);
    const std::size_t n = 2 * len;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d t = _mm256_fmsub_pd(vb, _mm256_loadu_pd(cp + k), _mm256_loadu_pd(p + k));
        _mm256_storeu_pd(p + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(hp + k), t));
    }
    for (; k < n; ++k) {
        p[k] = alpha * hp[k] + beta * cp[k] - p[k];
    }
}

void axpy(cplx *acc, cplx c, const cplx *v, std::size_t len) {
    double *a = raw(acc);
    const double *x = raw(v);
    const __m256d cr = _mm256_set1_pd(c.real());
    const __m256d ci = _mm256_set1_pd(c.imag());
    std::size_t s = 0;
    for (; s + 2 <= len; s += 2) {
        const __m256d xv = _mm256_loadu_pd(x + 2 * s);
        const __m256d swapped = _mm256_permute_pd(xv, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(cr, xv, _mm256_mul_pd(ci, swapped));
        _mm256_storeu_pd(a + 2 * s, _mm256_add_pd(_mm256_loadu_pd(a + 2 * s), prod));
    }
    for (; s < len; ++s) {
        acc[s] += c * v[s];
    }
}

void y_flip_accumulate(cplx *out, const cplx *in, std::size_t len, unsigned bit,
                       double coeff) {
    const std::size_t half = std::size_t{1} << bit;
    if (bit == 0) {
        const cplx up{0.0, coeff};
        for (std::size_t k = 0; k + 1 < len; k += 2) {
            const cplx a = in[k];
            const cplx b = in[k + 1];
            out[k] -= up * b;
            out[k + 1] += up * a;
        }
        return;
    }
    // -i c (x + iy) = c (y - ix);  +i c (x + iy) = c (-y + ix)
    const __m256d minus_i = _mm256_setr_pd(coeff, -coeff, coeff, -coeff);
    const __m256d plus_i = _mm256_setr_pd(-coeff, coeff, -coeff, coeff);
    double *o = raw(out);
    const double *x = raw(in);
    for (std::size_t base = 0; base < len; base += 2 * half) {
        double *olo = o + 2 * base;
        double *ohi = o + 2 * (base + half);
        const double *xlo = x + 2 * base;
        const double *xhi = x + 2 * (base + half);
        for (std::size_t k = 0; k < 2 * half; k += 4) {
            const __m256d a = _mm256_permute_pd(_mm256_loadu_pd(xlo + k), 0x5);
            const __m256d b = _mm256_permute_pd(_mm256_loadu_pd(xhi + k), 0x5);
            _mm256_storeu_pd(olo + k, _mm256_fmadd_pd(minus_i, b, _mm256_loadu_pd(olo + k)));
            _mm256_storeu_pd(ohi + k, _mm256_fmadd_pd(plus_i, a, _mm256_loadu_pd(ohi + k)));
        }
    }
}

void abs2(double *p, const cplx *psi, std::size_t len) {
    const double *x = raw(psi);
    std::size_t s = 0;
    for (; s + 4 <= len; s += 4) {
        const __m256d a = _mm256_loadu_pd(x + 2 * s);
        const __m256d b = _mm256_loadu_pd(x + 2 * s + 4);
        // [|0|^2, |2|^2, |1|^2, |3|^2] -> natural order
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        _mm256_storeu_pd(p + s, _mm256_permute4x64_pd(h, 0xD8));
    }
    for (; s < len; ++s) {
        p[s] = psi[s].real() * psi[s].real() + psi[s].imag() * psi[s].imag();
    }
}

constexpr KernelTable kTable{
    SimdLevel::avx2, butterfly, scale_diagonal, diagonal_fma, chebyshev_next,
    axpy,            y_flip_accumulate,          abs2,
};

} // namespace

const KernelTable &table() noexcept { return kTable; }

} // namespace lightcone::kernels::avx2
