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
#include "fr3/estimator.hpp"
#include "fr3/lsp_gen.hpp"

#include "approx.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace fr3;

namespace
{

// Long-double normal equations on x = log10 d.
struct OlsRef
{
    double a, b, s;
};

OlsRef ols_ref(const std::vector<double> &d, const std::vector<double> &y)
{
    const long double n = d.size();
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
    {
        const long double x = std::log10(static_cast<long double>(d[i]));
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const long double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const long double a = (sy - b * sx) / n;
    long double ss = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
    {
        const long double r = y[i] - a - b * std::log10(static_cast<long double>(d[i]));
        ss += r * r;
    }
    return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(std::sqrt(ss / (n - 2)))};
}

} // namespace

// ---- PDP and beams ----------------------------------------------------------------

TEST_CASE("PDP threshold")
{
    const Pdp pdp{{{0, -80}, {5e-9, -95.01}, {10e-9, -94.99}, {20e-9, -110}}, -110};
    const Pdp kept = threshold_pdp(pdp);
    REQUIRE(kept.taps.size() == 2);
    CHECK(kept.taps[0] == PdpTap{0, -80});
    CHECK(kept.taps[1] == PdpTap{10e-9, -94.99});
    CHECK(kept.noise_floor_mean_db == -110);

    // Exactly at noise + 15 dB is kept.
    CHECK(threshold_pdp(Pdp{{{0, -95}}, -110}).taps.size() == 1);
    CHECK(threshold_pdp(Pdp{{{0, -96}}, -110}).taps.empty());

    CHECK_THROWS_AS(threshold_pdp(Pdp{{{0, -80}, {0, -81}}, -110}), DomainError);
    CHECK_THROWS_AS(threshold_pdp(Pdp{{{9e-6, -80}}, -110}), DomainError);
    CHECK_THROWS_AS(pdp_to_taps(Pdp{{}, -110}), DomainError);

    const TapSet t = pdp_to_taps(kept);
    CHECK(t[0].power == rel(1e-8));
    CHECK(t[1].delay_s == 10e-9);
}

TEST_CASE("property: threshold is idempotent and keeps exactly the strong taps")
{
    oracle::Gen g(51);
    for (int trial = 0; trial < 200; ++trial)
    {
        const std::size_t n = g.size(1, 60);
        Pdp pdp{{}, g.uniform(-120, -90)};
        double tau = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            pdp.taps.push_back({tau, g.uniform(pdp.noise_floor_mean_db - 5, pdp.noise_floor_mean_db + 40)});
            tau += g.uniform(1e-9, 50e-9);
        }
        const Pdp once = threshold_pdp(pdp);
        CHECK(threshold_pdp(once) == once);
        const auto strong = std::count_if(pdp.taps.begin(), pdp.taps.end(), [&](const PdpTap &t) {
            return t.power_db >= pdp.noise_floor_mean_db + 15.0;
        });
        CHECK(once.taps.size() == static_cast<std::size_t>(strong));
        CHECK(std::is_sorted(once.taps.begin(), once.taps.end(),
                             [](const PdpTap &a, const PdpTap &b) { return a.delay_s < b.delay_s; }));
    }
}

TEST_CASE("omni power from beams")
{
    const std::vector<Beam> two{{0, 90, 1e-7}, {30, 90, 3e-7}};
    CHECK(synth_omni_power(two) == rel(4e-7));
    CHECK(synth_omni_power(std::vector<Beam>{{10, 80, 0.0}}) == 0.0);
    CHECK_THROWS_AS(synth_omni_power(std::vector<Beam>{}), DomainError);
    CHECK_THROWS_AS(synth_omni_power(std::vector<Beam>{{0, 0, -1.0}}), DomainError);

    const TapSet t = beams_to_taps(std::vector<Beam>{{30, 90, 1}, {-30, 90, 1}});
    CHECK(asa_from_taps(t) == rel(30.73, 1e-4));
    CHECK(zsa_from_taps(t) == 0.0);
}

// ---- Path-loss regression ---------------------------------------------------------

TEST_CASE("fit_path_loss: worked examples")
{
    const std::vector<double> d{1, 10, 100}, pl{50, 70, 90};
    const FitResult f = fit_path_loss(d, pl);
    CHECK(f.pl0_db == rel(50.0, 1e-12));
    CHECK(f.ple == rel(2.0, 1e-12));
    CHECK(std::abs(f.sigma_s_db) < 1e-12);
    CHECK(f.n == 3);

    // Noise-free data on the 6.9 GHz LOS line.
    std::vector<double> dd, pp;
    for (double x : {1.0, 2.0, 5.0, 13.0, 40.0})
    {
        dd.push_back(x);
        pp.push_back(48.3 + 15.0 * std::log10(x));
    }
    const FitResult e = fit_path_loss(dd, pp);
    CHECK(e.pl0_db == rel(48.3, 1e-12));
    CHECK(e.ple == rel(1.5, 1e-12));

    std::vector<PathLossSample> s;
    for (std::size_t i = 0; i < d.size(); ++i)
        s.push_back({d[i], pl[i]});
    CHECK(fit_path_loss(s).ple == rel(2.0, 1e-12));
}

TEST_CASE("fit_path_loss: failure modes")
{
    const std::vector<double> two{1, 2}, pl2{40, 41};
    CHECK_THROWS_AS(fit_path_loss(two, pl2), DomainError);
    const std::vector<double> same{5, 5, 5, 5}, pl4{60, 61, 59, 60};
    CHECK_THROWS_AS(fit_path_loss(same, pl4), RankDeficiencyError);
    const std::vector<double> close{1, 3, 0.5}, pl3{1, 2, 3};
    CHECK_THROWS_AS(fit_path_loss(close, pl3), DomainError);
    const std::vector<double> ok{1, 2, 3};
    CHECK_THROWS_AS(fit_path_loss(ok, pl4), DomainError);
}

TEST_CASE("property: OLS against normal equations, residual identities")
{
    oracle::Gen g(52);
    for (int trial = 0; trial < 300; ++trial)
    {
        const std::size_t n = g.size(3, 200);
        const double a = g.uniform(30, 70), b = g.uniform(0.5, 5), sd = g.uniform(0.1, 10);
        std::vector<double> d(n), pl(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            d[i] = g.log_uniform(1, 100);
            pl[i] = a + 10 * b * std::log10(d[i]) + sd * g.normal();
        }
        const FitResult f = fit_path_loss(d, pl);
        const OlsRef r = ols_ref(d, pl);
        CHECK(f.pl0_db == doctest::Approx(r.a).epsilon(1e-9));
        CHECK(10 * f.ple == doctest::Approx(r.b).epsilon(1e-9));
        CHECK(f.sigma_s_db == doctest::Approx(r.s).epsilon(1e-8));

        long double sum = 0, dot = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            sum += f.residuals_db[i];
            dot += f.residuals_db[i] * std::log10(static_cast<long double>(d[i]));
        }
        CHECK(std::abs(static_cast<double>(sum)) < 1e-8);
        CHECK(std::abs(static_cast<double>(dot)) < 1e-8);

        // Order and duplication.
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i)
            idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), g.rng);
        std::vector<double> d2, pl2;
        for (auto i : idx)
        {
            d2.push_back(d[i]);
            pl2.push_back(pl[i]);
            d2.push_back(d[i]);
            pl2.push_back(pl[i]);
        }
        const FitResult f2 = fit_path_loss(d2, pl2);
        CHECK(f2.pl0_db == doctest::Approx(f.pl0_db).epsilon(1e-9));
        CHECK(f2.ple == doctest::Approx(f.ple).epsilon(1e-9));
    }
}

TEST_CASE("fit_path_loss: Monte Carlo recovery at the measurement sample size")
{
    oracle::Gen g(53);
    std::vector<double> ple, sigma;
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<double> d(650), pl(650);
        for (std::size_t i = 0; i < d.size(); ++i)
        {
            d[i] = g.log_uniform(1, 50);
            pl[i] = 42.6 + 32.0 * std::log10(d[i]) + 6.6 * g.normal();
        }
        const FitResult f = fit_path_loss(d, pl);
        ple.push_back(f.ple);
        sigma.push_back(f.sigma_s_db);
        // Five standard errors: 6.6 / sqrt(2 * 650) = 0.18 dB for sigma.
        CHECK(std::abs(f.pl0_db - 42.6) < 2.6);
        CHECK(std::abs(f.sigma_s_db - 6.6) < 0.92);
    }
    CHECK(std::abs(oracle::mean(ple) - 3.2) < 0.02);
    CHECK(std::abs(oracle::mean(sigma) - 6.6) < 0.05);
}

// ---- Moments, distance sigma, correlation -----------------------------------------

TEST_CASE("log-normal moments")
{
    const std::vector<double> flat{1e-8, 1e-8, 1e-8};
    const LogMoments m = fit_lognormal(flat);
    CHECK(m.mu == rel(-8.0, 1e-12));
    CHECK(std::abs(m.sigma) < 1e-12);

    const std::vector<double> two{1e-8, 1e-7};
    const LogMoments t = fit_lognormal(two);
    CHECK(t.mu == rel(-7.5, 1e-12));
    CHECK(t.sigma == rel(std::sqrt(0.5), 1e-12));

    const std::vector<double> logs{-7.9, -7.5, -8.1, -7.7};
    const LogMoments l = log_moments(logs);
    CHECK(l.mu == rel(oracle::mean(logs), 1e-12));
    CHECK(l.sigma == rel(oracle::stddev(logs), 1e-12));

    CHECK_THROWS_AS(fit_lognormal(std::vector<double>{1e-8}), DomainError);
    CHECK_THROWS_AS(fit_lognormal(std::vector<double>{1e-8, 0.0}), DomainError);
    CHECK_THROWS_AS(fit_lognormal(std::vector<double>{1e-8, -1.0}), DomainError);
}

TEST_CASE("distance-dependent sigma")
{
    const std::vector<double> r{2, -4}, d{10, 100};
    CHECK(fit_distance_sigma(r, d) == rel(2.0, 1e-12));
    CHECK_THROWS_AS(fit_distance_sigma(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);
    CHECK_THROWS_AS(fit_distance_sigma(std::vector<double>{}, std::vector<double>{}), DomainError);

    oracle::Gen g(54);
    std::vector<double> res, dist;
    for (int i = 0; i < 10000; ++i)
    {
        dist.push_back(g.log_uniform(1.5, 50));
        res.push_back(6.5 * std::log10(dist.back()) * g.normal());
    }
    CHECK(std::abs(fit_distance_sigma(res, dist) - 6.5) <= 0.15);
}

TEST_CASE("pearson")
{
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(pearson(x, std::vector<double>{2, 4, 6, 8}) == rel(1.0, 1e-15));
    CHECK(pearson(x, std::vector<double>{8, 6, 4, 2}) == rel(-1.0, 1e-15));
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 1, 1, 1}), DomainError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DomainError);
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2, 3}), DomainError);

    oracle::Gen g(55);
    std::vector<double> a, b;
    for (int i = 0; i < 100000; ++i)
    {
        const double z1 = g.normal(), z2 = g.normal();
        a.push_back(z1);
        b.push_back(0.8 * z1 + 0.6 * z2);
    }
    CHECK(std::abs(pearson(a, b) - 0.8) < 0.01);
}

TEST_CASE("property: pearson matches the oracle and is affine invariant")
{
    oracle::Gen g(56);
    for (int trial = 0; trial < 300; ++trial)
    {
        const std::size_t n = g.size(3, 300);
        std::vector<double> x(n), y(n);
        const double rho = g.uniform(-1, 1);
        for (std::size_t i = 0; i < n; ++i)
        {
            x[i] = g.normal();
            y[i] = rho * x[i] + std::sqrt(1 - rho * rho) * g.normal();
        }
        const double r = pearson(x, y);
        CHECK(r == doctest::Approx(oracle::pearson(x, y)).epsilon(1e-9));
        CHECK(std::abs(r) <= 1.0);
        const double a = g.uniform(-10, 10), b = g.log_uniform(0.01, 100), s = g.uniform(0, 1) < 0.5 ? -1.0 : 1.0;
        std::vector<double> xt(x);
        for (auto &v : xt)
            v = a + s * b * v;
        CHECK(pearson(xt, y) == doctest::Approx(s * r).epsilon(1e-9));
    }
}

// ---- Probability plots ------------------------------------------------------------

TEST_CASE("normal quantiles and probability plots")
{
    CHECK(normal_quantile(0.75) == doctest::Approx(0.6745).epsilon(1e-4));
    CHECK(normal_quantile(0.25) == doctest::Approx(-0.6745).epsilon(1e-4));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1).epsilon(1e-15));
    CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
    CHECK_THROWS_AS(normal_quantile(1.0), DomainError);

    const std::vector<double> v{3, 1, 2, 5};
    const auto pts = probability_plot_points(v);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].ordered_value == 1);
    CHECK(pts[3].ordered_value == 5);
    CHECK(pts[0].theoretical_quantile == rel(normal_quantile(0.125), 1e-15));
    CHECK(pts[0].theoretical_quantile == rel(-pts[3].theoretical_quantile, 1e-12));
    CHECK(pts[1].theoretical_quantile == rel(-pts[2].theoretical_quantile, 1e-12));
    CHECK_THROWS_AS(probability_plot_points(std::vector<double>{1}), DomainError);

    oracle::Gen g(57);
    std::vector<double> x;
    for (int i = 0; i < 5000; ++i)
        x.push_back(-7.6 + 0.23 * g.normal());
    CHECK(std::abs(qq_slope(probability_plot_points(x)) / 0.23 - 1.0) < 0.02);
}

// ---- Record-file fits -------------------------------------------------------------

TEST_CASE("fit_records: groups, correlations and inter-frequency pairs")
{
    GeneratorConfig c;
    c.state = ChannelState::NLOS;
    c.n_drops = 20000;
    c.seed = 5;
    c.two_slope = false;
    std::vector<Record> recs;
    for (const auto &d : generate_drops(c, ModelRegistry::builtin()))
        for (const auto &r : flatten(d))
            recs.push_back(r);
    const FitReport rep = fit_records(recs);
    CHECK(rep.warnings.empty());
    REQUIRE(rep.groups.size() == 3);

    const GroupFit &g69 = rep.groups[0];
    CHECK(g69.band == Band::B6_9);
    CHECK(g69.corr_labels == std::vector<std::string>{"SF", "DS"});
    CHECK(!g69.asa.has_value());
    CHECK(std::abs(g69.path_loss.ple - 3.2) < 0.05);
    CHECK(std::abs(g69.path_loss.sigma_s_db - 6.6) < 0.1);
    CHECK(std::abs(g69.corr(0, 1) - (-0.55)) < 0.02);

    const GroupFit &g83 = rep.groups[1];
    CHECK(g83.corr_labels.size() == 4);
    CHECK(std::abs(g83.asa->mu - 1.84) < 0.005);
    CHECK(std::abs(g83.corr(1, 2) - 0.39) < 0.02);

    // Six pairs per state: 3 band pairs x {SF, DS}.
    REQUIRE(rep.interfreq.size() == 6);
    for (const auto &f : rep.interfreq)
    {
        CHECK(f.n == 20000);
        if (f.lsp == Lsp::SF && f.band_a == Band::B6_9 && f.band_b == Band::B8_3)
            CHECK(std::abs(f.r - 0.91) < 0.02);
        if (f.lsp == Lsp::DS && f.band_a == Band::B8_3 && f.band_b == Band::B14_5)
            CHECK(std::abs(f.r - 0.71) < 0.02);
    }
}

TEST_CASE("fit_records: undersized and degenerate groups are skipped with a warning")
{
    std::vector<Record> recs;
    for (std::uint64_t i = 0; i < 2; ++i)
        recs.push_back({i, Band::B8_3, ChannelState::LOS, 2.0 + static_cast<double>(i), 60, 0, -7.9, 1.7, 1.2, 1e6});
    for (std::uint64_t i = 0; i < 4; ++i)
        recs.push_back({i, Band::B6_9, ChannelState::LOS, 5.0, 60 + static_cast<double>(i), 0, -7.9, {}, {}, 1e6});
    const FitReport rep = fit_records(recs);
    CHECK(rep.groups.empty());
    CHECK(rep.interfreq.empty());
    CHECK(rep.warnings.size() == 2);
    CHECK(fit_records(std::vector<Record>{}).groups.empty());
}
