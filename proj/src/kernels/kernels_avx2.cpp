// SPDX-License-Identifier: Apache-2.0
//
// fr3chan: large-scale indoor-office channel model for the FR3 bands
// Copyright (C) 2026 The fr3chan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// AVX2 + FMA kernels, 4 doubles per lane, two independent accumulators to hide
// FMA latency. Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "fr3/kernels.hpp"

#include <immintrin.h>

#include <cstddef>

namespace fr3::kernels::avx2
{
namespace
{

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

double sum(std::span<const double> x)
{
    const double *p = x.data();
    const std::size_t n = x.size();
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
    {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(p + i + 4));
    }
    for (; i + 4 <= n; i += 4)
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i)
        acc += p[i];
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    const double *pa = a.data();
    const double *pb = b.data();
    const std::size_t n = a.size();
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
    {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), a1);
    }
    for (; i + 4 <= n; i += 4)
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), a0);
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i)
        acc += pa[i] * pb[i];
    return acc;
}

double weighted_sq_dev(std::span<const double> x, std::span<const double> w, double center)
{
    const double *px = x.data();
    const double *pw = w.data();
    const std::size_t n = x.size();
    const __m256d c = _mm256_set1_pd(center);
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
    {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(px + i), c);
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(px + i + 4), c);
        a0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(pw + i), d0), d0, a0);
        a1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(pw + i + 4), d1), d1, a1);
    }
    for (; i + 4 <= n; i += 4)
    {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(px + i), c);
        a0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(pw + i), d0), d0, a0);
    }
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i)
    {
        const double d = px[i] - center;
        acc += pw[i] * d * d;
    }
    return acc;
}

CrossMoments centered_cross_moments(std::span<const double> x, std::span<const double> y, double cx, double cy)
{
    const double *px = x.data();
    const double *py = y.data();
    const std::size_t n = x.size();
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    __m256d sxx = _mm256_setzero_pd();
    __m256d sxy = _mm256_setzero_pd();
    __m256d syy = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(px + i), vcx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(py + i), vcy);
        sxx = _mm256_fmadd_pd(dx, dx, sxx);
        sxy = _mm256_fmadd_pd(dx, dy, sxy);
        syy = _mm256_fmadd_pd(dy, dy, syy);
    }
    CrossMoments m{hsum(sxx), hsum(sxy), hsum(syy)};
    for (; i < n; ++i)
    {
        const double dx = px[i] - cx;
        const double dy = py[i] - cy;
        m.sxx += dx * dx;
        m.sxy += dx * dy;
        m.syy += dy * dy;
    }
    return m;
}

} // namespace fr3::kernels::avx2
