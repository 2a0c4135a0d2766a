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

#include "fr3/error.hpp"
#include "fr3/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

namespace fr3::kernels
{
namespace
{

struct KernelTable
{
    double (*sum)(std::span<const double>);
    double (*dot)(std::span<const double>, std::span<const double>);
    double (*weighted_sq_dev)(std::span<const double>, std::span<const double>, double);
    CrossMoments (*centered_cross_moments)(std::span<const double>, std::span<const double>, double, double);
};

constexpr KernelTable kScalar{&scalar::sum, &scalar::dot, &scalar::weighted_sq_dev, &scalar::centered_cross_moments};
#if defined(FR3_HAVE_AVX2)
constexpr KernelTable kAvx2{&avx2::sum, &avx2::dot, &avx2::weighted_sq_dev, &avx2::centered_cross_moments};
#endif
#if defined(FR3_HAVE_NEON)
constexpr KernelTable kNeon{&neon::sum, &neon::dot, &neon::weighted_sq_dev, &neon::centered_cross_moments};
#endif

const KernelTable &table_for(Isa isa)
{
    switch (isa)
    {
#if defined(FR3_HAVE_AVX2)
    case Isa::Avx2:
        return kAvx2;
#endif
#if defined(FR3_HAVE_NEON)
    case Isa::Neon:
        return kNeon;
#endif
    default:
        return kScalar;
    }
}

// FR3_KERNELS=scalar|avx2|neon forces a variant (if available) at startup.
Isa initial_isa()
{
    if (const char *env = std::getenv("FR3_KERNELS"))
    {
        const std::string_view want(env);
        for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
            if (want == isa_name(isa) && isa_available(isa))
                return isa;
    }
    return detect_isa();
}

std::atomic<const KernelTable *> &active_table()
{
    static std::atomic<const KernelTable *> table{&table_for(initial_isa())};
    return table;
}

std::atomic<Isa> &active_tag()
{
    static std::atomic<Isa> tag{initial_isa()};
    return tag;
}

void check_lengths(std::size_t a, std::size_t b)
{
    if (a != b)
        throw DomainError("kernel inputs must have equal length (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

} // namespace

std::string_view isa_name(Isa isa)
{
    switch (isa)
    {
    case Isa::Avx2:
        return "avx2";
    case Isa::Neon:
        return "neon";
    default:
        return "scalar";
    }
}

bool isa_available(Isa isa)
{
    switch (isa)
    {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if defined(FR3_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::Neon:
#if defined(FR3_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Isa detect_isa()
{
    if (isa_available(Isa::Avx2))
        return Isa::Avx2;
    if (isa_available(Isa::Neon))
        return Isa::Neon;
    return Isa::Scalar;
}

Isa active_isa() { return active_tag().load(std::memory_order_relaxed); }

void set_isa(Isa isa)
{
    if (!isa_available(isa))
        throw DomainError("kernel ISA '" + std::string(isa_name(isa)) + "' is not available on this host");
    active_table().store(&table_for(isa), std::memory_order_relaxed);
    active_tag().store(isa, std::memory_order_relaxed);
}

double sum(std::span<const double> x) { return active_table().load(std::memory_order_relaxed)->sum(x); }

double dot(std::span<const double> a, std::span<const double> b)
{
    check_lengths(a.size(), b.size());
    return active_table().load(std::memory_order_relaxed)->dot(a, b);
}

double weighted_sq_dev(std::span<const double> x, std::span<const double> w, double center)
{
    check_lengths(x.size(), w.size());
    return active_table().load(std::memory_order_relaxed)->weighted_sq_dev(x, w, center);
}

CrossMoments centered_cross_moments(std::span<const double> x, std::span<const double> y, double cx, double cy)
{
    check_lengths(x.size(), y.size());
    return active_table().load(std::memory_order_relaxed)->centered_cross_moments(x, y, cx, cy);
}

} // namespace fr3::kernels
