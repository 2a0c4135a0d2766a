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

#include "fr3/dispersion.hpp"
#include "fr3/error.hpp"
#include "fr3/kernels.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

namespace k = fr3::kernels;

namespace
{

long double ref_sum(const std::vector<double> &x)
{
    long double s = 0;
    for (double v : x)
        s += v;
    return s;
}

bool close(double a, long double b, double rel)
{
    return std::abs(a - static_cast<double>(b)) <= rel * std::max(1.0L, std::abs(b));
}

// Restores the dispatch choice on scope exit.
struct IsaGuard
{
    k::Isa saved = k::active_isa();
    ~IsaGuard() { k::set_isa(saved); }
};

} // namespace

TEST_CASE("scalar kernels match long-double references")
{
    oracle::Gen g(11);
    for (int trial = 0; trial < 200; ++trial)
    {
        const std::size_t n = g.size(0, 67);
        std::vector<double> x(n), y(n), w(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            x[i] = g.uniform(-5, 5);
            y[i] = g.uniform(-5, 5);
            w[i] = g.uniform(0.1, 2);
        }
        CHECK(close(k::scalar::sum(x), ref_sum(x), 1e-13));

        long double dot = 0, wsd = 0, sxx = 0, sxy = 0, syy = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            dot += static_cast<long double>(x[i]) * y[i];
            wsd += static_cast<long double>(w[i]) * (x[i] - 0.3L) * (x[i] - 0.3L);
            sxx += (x[i] - 0.1L) * (x[i] - 0.1L);
            sxy += (x[i] - 0.1L) * (y[i] + 0.2L);
            syy += (y[i] + 0.2L) * (y[i] + 0.2L);
        }
        CHECK(close(k::scalar::dot(x, y), dot, 1e-12));
        CHECK(close(k::scalar::weighted_sq_dev(x, w, 0.3), wsd, 1e-12));
        const auto m = k::scalar::centered_cross_moments(x, y, 0.1, -0.2);
        CHECK(close(m.sxx, sxx, 1e-12));
        CHECK(close(m.sxy, sxy, 1e-12));
        CHECK(close(m.syy, syy, 1e-12));
    }
}

#if FR3_HAVE_AVX2
TEST_CASE("AVX2 kernels agree with the scalar reference")
{
    if (!k::isa_available(k::Isa::Avx2))
    {
        MESSAGE("AVX2 not available on this host; skipped");
        return;
    }
    oracle::Gen g(12);
    // Lengths straddle the 4- and 8-lane boundaries and the scalar tail.
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 1000u, 1003u})
        for (int trial = 0; trial < 20; ++trial)
        {
            std::vector<double> x(n), y(n), w(n);
            for (std::size_t i = 0; i < n; ++i)
            {
                x[i] = g.uniform(-1e3, 1e3);
                y[i] = g.uniform(-1, 1);
                w[i] = g.log_uniform(1e-9, 1);
            }
            const double tol = 1e-12;
            auto rel = [&](double a, double b) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)) * 10; };
            CHECK(rel(k::avx2::sum(x), k::scalar::sum(x)));
            CHECK(rel(k::avx2::dot(x, y), k::scalar::dot(x, y)));
            CHECK(rel(k::avx2::weighted_sq_dev(x, w, 12.5), k::scalar::weighted_sq_dev(x, w, 12.5)));
            const auto a = k::avx2::centered_cross_moments(x, y, 1.0, 0.5);
            const auto b = k::scalar::centered_cross_moments(x, y, 1.0, 0.5);
            CHECK(rel(a.sxx, b.sxx));
            CHECK(rel(a.sxy, b.sxy));
            CHECK(rel(a.syy, b.syy));
        }
}
#endif

#if FR3_HAVE_NEON
TEST_CASE("NEON kernels agree with the scalar reference")
{
    oracle::Gen g(13);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 17u, 1001u})
    {
        std::vector<double> x(n), y(n), w(n, 0.5);
        for (std::size_t i = 0; i < n; ++i)
        {
            x[i] = g.uniform(-10, 10);
            y[i] = g.uniform(-10, 10);
        }
        CHECK(k::neon::sum(x) == doctest::Approx(k::scalar::sum(x)).epsilon(1e-12));
        CHECK(k::neon::dot(x, y) == doctest::Approx(k::scalar::dot(x, y)).epsilon(1e-12));
        CHECK(k::neon::weighted_sq_dev(x, w, 1.0) ==
              doctest::Approx(k::scalar::weighted_sq_dev(x, w, 1.0)).epsilon(1e-12));
    }
}
#endif

TEST_CASE("dispatch: every available ISA gives the same dispersion results")
{
    IsaGuard guard;
    oracle::Gen g(14);
    std::vector<fr3::Tap> taps;
    for (int i = 0; i < 40; ++i)
        taps.push_back({g.uniform(0, 1e-6), g.log_uniform(1e-9, 1e-3), g.uniform(-20, 20), g.uniform(-10, 10)});
    const fr3::TapSet set(taps);

    k::set_isa(k::Isa::Scalar);
    const double ds_ref = fr3::rms_delay_spread(set);
    const double as_ref = fr3::asa_from_taps(set);
    for (k::Isa isa : {k::Isa::Avx2, k::Isa::Neon})
    {
        if (!k::isa_available(isa))
            continue;
        k::set_isa(isa);
        CHECK(k::active_isa() == isa);
        CHECK(fr3::rms_delay_spread(set) == doctest::Approx(ds_ref).epsilon(1e-12));
        CHECK(fr3::asa_from_taps(set) == doctest::Approx(as_ref).epsilon(1e-12));
    }
}

TEST_CASE("dispatch: selecting an unavailable ISA is rejected")
{
    IsaGuard guard;
    for (k::Isa isa : {k::Isa::Avx2, k::Isa::Neon})
        if (!k::isa_available(isa))
            CHECK_THROWS_AS(k::set_isa(isa), fr3::DomainError);
    CHECK(k::isa_available(k::Isa::Scalar));
    CHECK_NOTHROW(k::set_isa(k::Isa::Scalar));
    CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
}

TEST_CASE("dispatching wrappers reject mismatched lengths")
{
    const std::vector<double> a{1, 2, 3}, b{1, 2};
    CHECK_THROWS_AS(k::dot(a, b), fr3::DomainError);
    CHECK_THROWS_AS(k::weighted_sq_dev(a, b, 0.0), fr3::DomainError);
    CHECK_THROWS_AS(k::centered_cross_moments(a, b, 0.0, 0.0), fr3::DomainError);
}
