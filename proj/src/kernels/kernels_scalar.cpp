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

// Scalar reference kernels. Plain left-to-right accumulation; these define the
// semantics the SIMD variants are tested against.

#include "fr3/kernels.hpp"

#include <cstddef>

namespace fr3::kernels::scalar
{

double sum(std::span<const double> x)
{
    double acc = 0.0;
    for (double v : x)
        acc += v;
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

double weighted_sq_dev(std::span<const double> x, std::span<const double> w, double center)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double d = x[i] - center;
        acc += w[i] * d * d;
    }
    return acc;
}

CrossMoments centered_cross_moments(std::span<const double> x, std::span<const double> y, double cx, double cy)
{
    CrossMoments m;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double dx = x[i] - cx;
        const double dy = y[i] - cy;
        m.sxx += dx * dx;
        m.sxy += dx * dy;
        m.syy += dy * dy;
    }
    return m;
}

} // namespace fr3::kernels::scalar
