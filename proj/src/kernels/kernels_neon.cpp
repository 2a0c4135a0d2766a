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

// NEON kernels for aarch64, 2 doubles per register.

#include "fr3/kernels.hpp"

#include <arm_neon.h>

#include <cstddef>

namespace fr3::kernels::neon
{

double sum(std::span<const double> x)
{
    const double *p = x.data();
    const std::size_t n = x.size();
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        a0 = vaddq_f64(a0, vld1q_f64(p + i));
        a1 = vaddq_f64(a1, vld1q_f64(p + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i)
        acc += p[i];
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    const double *pa = a.data();
    const double *pb = b.data();
    const std::size_t n = a.size();
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        a0 = vfmaq_f64(a0, vld1q_f64(pa + i), vld1q_f64(pb + i));
        a1 = vfmaq_f64(a1, vld1q_f64(pa + i + 2), vld1q_f64(pb + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i)
        acc += pa[i] * pb[i];
    return acc;
}

double weighted_sq_dev(std::span<const double> x, std::span<const double> w, double center)
{
    const double *px = x.data();
    const double *pw = w.data();
    const std::size_t n = x.size();
    const float64x2_t c = vdupq_n_f64(center);
    float64x2_t acc2 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        const float64x2_t d = vsubq_f64(vld1q_f64(px + i), c);
        acc2 = vfmaq_f64(acc2, vmulq_f64(vld1q_f64(pw + i), d), d);
    }
    double acc = vaddvq_f64(acc2);
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
    const float64x2_t vcx = vdupq_n_f64(cx);
    const float64x2_t vcy = vdupq_n_f64(cy);
    float64x2_t sxx = vdupq_n_f64(0.0);
    float64x2_t sxy = vdupq_n_f64(0.0);
    float64x2_t syy = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        const float64x2_t dx = vsubq_f64(vld1q_f64(px + i), vcx);
        const float64x2_t dy = vsubq_f64(vld1q_f64(py + i), vcy);
        sxx = vfmaq_f64(sxx, dx, dx);
        sxy = vfmaq_f64(sxy, dx, dy);
        syy = vfmaq_f64(syy, dy, dy);
    }
    CrossMoments m{vaddvq_f64(sxx), vaddvq_f64(sxy), vaddvq_f64(syy)};
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

} // namespace fr3::kernels::neon
