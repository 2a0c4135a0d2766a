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

#ifndef FR3_KERNELS_HPP
#define FR3_KERNELS_HPP

// Reduction kernels behind the delay/angle moments and the regression statistics.
//
// Every kernel exists as a scalar reference (namespace scalar) and, where the target
// supports it, as AVX2+FMA (x86-64) or NEON (aarch64) variants. The dispatching
// free functions route to the best ISA detected at runtime; set_isa() pins a
// variant, which the equivalence tests use to compare them against each other.
//
// SIMD variants reassociate the sums, so results agree with the scalar path to
// rounding (a few ulp times the condition number), not bit for bit.

#include <span>
#include <string_view>

namespace fr3::kernels
{

enum class Isa
{
    Scalar,
    Avx2,
    Neon
};

std::string_view isa_name(Isa isa);

// True when the variant is compiled in and the running CPU supports it.
bool isa_available(Isa isa);

// Best available ISA; what the dispatcher picks unless overridden.
Isa detect_isa();

Isa active_isa();

// Pin the dispatcher to a variant. Throws DomainError if it is unavailable.
void set_isa(Isa isa);

struct CrossMoments
{
    double sxx = 0.0; // sum (x - cx)^2
    double sxy = 0.0; // sum (x - cx)(y - cy)
    double syy = 0.0; // sum (y - cy)^2
};

// Sum of the elements.
double sum(std::span<const double> x);

// Sum of a[i] * b[i]. Spans must have equal length.
double dot(std::span<const double> a, std::span<const double> b);

// Sum of w[i] * (x[i] - center)^2.
double weighted_sq_dev(std::span<const double> x, std::span<const double> w, double center);

// Centered second moments of the pairs (x[i], y[i]) about (cx, cy).
CrossMoments centered_cross_moments(std::span<const double> x, std::span<const double> y, double cx, double cy);

// Per-ISA entry points. Callers normally use the dispatching functions above.
namespace scalar
{
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double weighted_sq_dev(std::span<const double> x, std::span<const double> w, double center);
CrossMoments centered_cross_moments(std::span<const double> x, std::span<const double> y, double cx, double cy);
} // namespace scalar

#if defined(FR3_HAVE_AVX2)
namespace avx2
{
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double weighted_sq_dev(std::span<const double> x, std::span<const double> w, double center);
CrossMoments centered_cross_moments(std::span<const double> x, std::span<const double> y, double cx, double cy);
} // namespace avx2
#endif

#if defined(FR3_HAVE_NEON)
namespace neon
{
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double weighted_sq_dev(std::span<const double> x, std::span<const double> w, double center);
CrossMoments centered_cross_moments(std::span<const double> x, std::span<const double> y, double cx, double cy);
} // namespace neon
#endif

} // namespace fr3::kernels

#endif
