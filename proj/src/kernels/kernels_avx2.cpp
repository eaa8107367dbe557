// Copyright 2026 The qwalk Authors
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

// Compiled with -mavx2 only; callers reach these through the dispatch table
// after a CPU feature check.

#include <immintrin.h>

#include <cstddef>

#include "qwalk/kernels.hpp"

namespace qwalk::kernels {

// One site = (dn.re, dn.im, up.re, up.im) = exactly one __m256d.
void ring_step_avx2(std::span<const Complex> in, std::span<const Complex> phases, std::span<Complex> out) {
    const std::size_t n_sites = in.size() / 2;
    const double *a = reinterpret_cast<const double *>(in.data());
    const double *ph = phases.empty() ? nullptr : reinterpret_cast<const double *>(phases.data());
    double *o = reinterpret_cast<double *>(out.data());
    const __m256d inv_sqrt2 = _mm256_set1_pd(0.70710678118654752440);

    for (std::size_t k = 0; k < n_sites; ++k) {
        __m256d v = _mm256_loadu_pd(a + 4 * k);
        __m256d swapped = _mm256_permute2f128_pd(v, v, 0x01);
        __m256d sum = _mm256_add_pd(v, swapped);   // lo: dn + up
        __m256d diff = _mm256_sub_pd(swapped, v);  // hi: dn - up
        __m256d c = _mm256_mul_pd(_mm256_blend_pd(sum, diff, 0b1100), inv_sqrt2);
        if (ph != nullptr) {
            __m256d p = _mm256_loadu_pd(ph + 4 * k);
            __m256d p_re = _mm256_movedup_pd(p);
            __m256d p_im = _mm256_permute_pd(p, 0xF);
            __m256d t1 = _mm256_mul_pd(c, p_re);
            __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(c, 0x5), p_im);
            c = _mm256_addsub_pd(t1, t2);
        }
        std::size_t right = (k + 1 == n_sites) ? 0 : k + 1;
        std::size_t left = (k == 0) ? n_sites - 1 : k - 1;
        _mm_storeu_pd(o + 4 * right, _mm256_castpd256_pd128(c));
        _mm_storeu_pd(o + 4 * left + 2, _mm256_extractf128_pd(c, 1));
    }
}

void site_marginals_avx2(std::span<const Complex> amplitudes, std::span<double> probabilities) {
    const double *a = reinterpret_cast<const double *>(amplitudes.data());
    const std::size_t n_sites = probabilities.size();
    for (std::size_t k = 0; k < n_sites; ++k) {
        __m256d v = _mm256_loadu_pd(a + 4 * k);
        __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v, v), _mm256_setzero_pd());
        __m128d total = _mm_add_sd(_mm256_castpd256_pd128(h), _mm256_extractf128_pd(h, 1));
        probabilities[k] = _mm_cvtsd_f64(total);
    }
}

}  // namespace qwalk::kernels
