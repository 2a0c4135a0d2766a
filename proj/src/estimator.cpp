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

#include "fr3/estimator.hpp"

#include "fr3/error.hpp"
#include "fr3/kernels.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace fr3
{

void Pdp::validate() const
{
    for (std::size_t i = 0; i < taps.size(); ++i)
    {
        if (!std::isfinite(taps[i].delay_s) || !std::isfinite(taps[i].power_db))
            throw DomainError("PDP tap " + std::to_string(i) + " is not finite");
        if (taps[i].delay_s < 0.0 || taps[i].delay_s > kMaxExcessDelayS)
            throw DomainError("PDP tap delay outside [0, 8 us]");
        if (i > 0 && !(taps[i].delay_s > taps[i - 1].delay_s))
            throw DomainError("PDP delays must be strictly increasing");
    }
}

Pdp threshold_pdp(const Pdp &pdp)
{
    pdp.validate();
    Pdp out;
    out.noise_floor_mean_db = pdp.noise_floor_mean_db;
    const double floor = pdp.noise_floor_mean_db + kPdpThresholdDb;
    for (const auto &t : pdp.taps)
        if (t.power_db >= floor)
            out.taps.push_back(t);
    return out;
}

TapSet pdp_to_taps(const Pdp &pdp)
{
    if (pdp.taps.empty())
        throw DomainError("PDP has no taps");
    std::vector<Tap> taps;
    taps.reserve(pdp.taps.size());
    for (const auto &t : pdp.taps)
        taps.push_back({t.delay_s, std::pow(10.0, t.power_db / 10.0), std::nullopt, std::nullopt});
    return TapSet(taps);
}

double synth_omni_power(std::span<const Beam> beams)
{
    if (beams.empty())
        throw DomainError("beam set is empty");
    double total = 0.0;
    for (const auto &b : beams)
    {
        if (!(b.power >= 0.0) || !std::isfinite(b.power))
            throw DomainError("beam power must be finite and non-negative");
        total += b.power;
    }
    return total;
}

TapSet beams_to_taps(std::span<const Beam> beams)
{
    if (beams.empty())
        throw DomainError("beam set is empty");
    std::vector<Tap> taps;
    for (const auto &b : beams)
        taps.push_back({0.0, b.power, b.azimuth_deg, b.zenith_deg});
    return TapSet(taps);
}

// ---- Regression -------------------------------------------------------------------

FitResult fit_path_loss(std::span<const double> distances_m, std::span<const double> path_loss_db)
{
    if (distances_m.size() != path_loss_db.size())
        throw DomainError("distance and path loss lengths differ");
    const std::size_t n = distances_m.size();
    if (n < 3)
        throw DomainError("path loss fit needs at least 3 samples");

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!(distances_m[i] >= 1.0) || !std::isfinite(path_loss_db[i]))
            throw DomainError("path loss samples need d >= 1 m and finite loss");
        x[i] = 10.0 * std::log10(distances_m[i]);
    }
    const double mx = kernels::sum(x) / static_cast<double>(n);
    const double my = kernels::sum(path_loss_db) / static_cast<double>(n);
    const auto m = kernels::centered_cross_moments(x, path_loss_db, mx, my);
    // Relative to the regressor scale, so a 1e-12 jitter in distances does not pass.
    if (!(m.sxx > 1e-18 * std::max(1.0, mx * mx) * static_cast<double>(n)))
        throw RankDeficiencyError("all distances are identical");

    FitResult r;
    r.n = n;
    r.ple = m.sxy / m.sxx;
    const double slope = r.ple;
    r.pl0_db = my - slope * mx;
    r.residuals_db.resize(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        r.residuals_db[i] = path_loss_db[i] - (r.pl0_db + slope * x[i]);
        ss += r.residuals_db[i] * r.residuals_db[i];
    }
    r.sigma_s_db = std::sqrt(ss / static_cast<double>(n - 2));
    return r;
}

FitResult fit_path_loss(std::span<const PathLossSample> samples)
{
    std::vector<double> d, pl;
    d.reserve(samples.size());
    pl.reserve(samples.size());
    for (const auto &s : samples)
    {
        d.push_back(s.distance_m);
        pl.push_back(s.path_loss_db);
    }
    return fit_path_loss(d, pl);
}

LogMoments log_moments(std::span<const double> log10_values)
{
    const std::size_t n = log10_values.size();
    if (n < 2)
        throw DomainError("log-normal fit needs at least 2 values");
    const double mu = kernels::sum(log10_values) / static_cast<double>(n);
    const std::vector<double> ones(n, 1.0);
    const double ss = kernels::weighted_sq_dev(log10_values, ones, mu);
    return {mu, std::sqrt(ss / static_cast<double>(n - 1))};
}

LogMoments fit_lognormal(std::span<const double> values)
{
    std::vector<double> logs;
    logs.reserve(values.size());
    for (double v : values)
    {
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("log-normal fit needs positive finite values");
        logs.push_back(std::log10(v));
    }
    return log_moments(logs);
}

double fit_distance_sigma(std::span<const double> residuals_db, std::span<const double> distances_m)
{
    if (residuals_db.size() != distances_m.size())
        throw DomainError("residual and distance lengths differ");
    if (residuals_db.empty())
        throw DomainError("distance-sigma fit needs at least one sample");
    std::vector<double> z(residuals_db.size());
    for (std::size_t i = 0; i < z.size(); ++i)
    {
        if (!(distances_m[i] > 1.0))
            throw DomainError("distance-sigma fit needs every distance > 1 m");
        z[i] = residuals_db[i] / std::log10(distances_m[i]);
    }
    return std::sqrt(kernels::dot(z, z) / static_cast<double>(z.size()));
}

double pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw DomainError("pearson needs equal lengths");
    if (x.size() < 3)
        throw DomainError("pearson needs at least 3 pairs");
    const double n = static_cast<double>(x.size());
    const auto m = kernels::centered_cross_moments(x, y, kernels::sum(x) / n, kernels::sum(y) / n);
    if (!(m.sxx > 0.0) || !(m.syy > 0.0))
        throw DomainError("pearson undefined for zero variance");
    return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

// ---- Probability plots ------------------------------------------------------------

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("quantile probability must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::vector<QqPoint> probability_plot_points(std::span<const double> values)
{
    if (values.size() < 2)
        throw DomainError("probability plot needs at least 2 values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<QqPoint> out(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        out[i] = {normal_quantile((static_cast<double>(i) + 0.5) / n), sorted[i]};
    return out;
}

double qq_slope(std::span<const QqPoint> points)
{
    std::vector<double> q, v;
    for (const auto &p : points)
    {
        q.push_back(p.theoretical_quantile);
        v.push_back(p.ordered_value);
    }
    const double n = static_cast<double>(q.size());
    if (q.size() < 2)
        throw DomainError("slope needs at least 2 points");
    const auto m = kernels::centered_cross_moments(q, v, kernels::sum(q) / n, kernels::sum(v) / n);
    return m.sxy / m.sxx;
}

// ---- Record-file fits -------------------------------------------------------------

namespace
{

double pearson_or_nan(std::span<const double> x, std::span<const double> y)
{
    try
    {
        return pearson(x, y);
    }
    catch (const DomainError &)
    {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace

FitReport fit_records(std::span<const Record> records)
{
    FitReport report;

    std::map<std::pair<Band, ChannelState>, std::vector<const Record *>> groups;
    for (const auto &r : records)
        groups[{r.band, r.state}].push_back(&r);

    // Residual SF per (band, state, drop_id), for inter-frequency pairing.
    std::map<std::pair<Band, ChannelState>, std::map<std::uint64_t, std::pair<double, double>>> by_drop;

    for (const auto &[key, rows] : groups)
    {
        const std::string name = std::string(band_label(key.first)) + " GHz " + std::string(state_label(key.second));
        if (rows.size() < kMinGroupSamples)
        {
            report.warnings.push_back(name + ": " + std::to_string(rows.size()) + " sample(s), need " +
                                      std::to_string(kMinGroupSamples) + "; skipped");
            continue;
        }
        std::vector<double> d, pl, ds, asa, zsa;
        for (const Record *r : rows)
        {
            d.push_back(r->d_m);
            pl.push_back(r->pl_db);
            ds.push_back(r->ds_log10s);
            if (r->asa_log10deg && r->zsa_log10deg)
            {
                asa.push_back(*r->asa_log10deg);
                zsa.push_back(*r->zsa_log10deg);
            }
        }

        GroupFit g{key.first, key.second, {}, std::nullopt, {}, std::nullopt, std::nullopt, {}, {}};
        try
        {
            g.path_loss = fit_path_loss(d, pl);
        }
        catch (const RankDeficiencyError &e)
        {
            report.warnings.push_back(name + ": " + e.what() + "; skipped");
            continue;
        }
        g.ds = log_moments(ds);
        const bool angular = asa.size() == rows.size();
        if (angular)
        {
            g.asa = log_moments(asa);
            g.zsa = log_moments(zsa);
        }

        std::vector<double> far_res, far_d;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d[i] > 1.0)
            {
                far_res.push_back(g.path_loss.residuals_db[i]);
                far_d.push_back(d[i]);
            }
        if (!far_d.empty())
            g.distance_sigma_db = fit_distance_sigma(far_res, far_d);

        std::vector<std::span<const double>> cols{g.path_loss.residuals_db, ds};
        g.corr_labels = {"SF", "DS"};
        if (angular)
        {
            cols.push_back(asa);
            cols.push_back(zsa);
            g.corr_labels.push_back("ASA");
            g.corr_labels.push_back("ZSA");
        }
        const auto k = static_cast<Eigen::Index>(cols.size());
        g.corr = Eigen::MatrixXd::Identity(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < i; ++j)
            {
                const double r = pearson_or_nan(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
                g.corr(i, j) = r;
                g.corr(j, i) = r;
            }

        auto &drops = by_drop[key];
        for (std::size_t i = 0; i < rows.size(); ++i)
            drops[rows[i]->drop_id] = {g.path_loss.residuals_db[i], ds[i]};
        report.groups.push_back(std::move(g));
    }

    for (ChannelState st : kAllStates)
        for (std::size_t a = 0; a < kAllBands.size(); ++a)
            for (std::size_t b = a + 1; b < kAllBands.size(); ++b)
            {
                const auto ia = by_drop.find({kAllBands[a], st});
                const auto ib = by_drop.find({kAllBands[b], st});
                if (ia == by_drop.end() || ib == by_drop.end())
                    continue;
                std::vector<double> sfa, sfb, dsa, dsb;
                for (const auto &[id, va] : ia->second)
                {
                    const auto it = ib->second.find(id);
                    if (it == ib->second.end())
                        continue;
                    sfa.push_back(va.first);
                    sfb.push_back(it->second.first);
                    dsa.push_back(va.second);
                    dsb.push_back(it->second.second);
                }
                if (sfa.size() < kMinGroupSamples)
                    continue;
                report.interfreq.push_back({st, Lsp::SF, kAllBands[a], kAllBands[b], pearson_or_nan(sfa, sfb), sfa.size()});
                report.interfreq.push_back({st, Lsp::DS, kAllBands[a], kAllBands[b], pearson_or_nan(dsa, dsb), dsa.size()});
            }
    return report;
}

} // namespace fr3
