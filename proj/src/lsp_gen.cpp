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

#include "fr3/lsp_gen.hpp"

#include "fr3/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace fr3
{

Rng make_substream(std::uint64_t seed, std::uint64_t stream_id)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                      0x66723363u};
    return Rng(seq);
}

namespace
{

Eigen::VectorXd standard_normals(Eigen::Index n, Rng &rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i)
        z(i) = normal(rng);
    return z;
}

// Correlated normals: L z, with L lower triangular. Plain loop so the result does not
// depend on Eigen's vectorization choices.
Eigen::VectorXd correlate(const Eigen::MatrixXd &factor, const Eigen::VectorXd &z)
{
    const Eigen::Index n = z.size();
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        double acc = 0.0;
        for (Eigen::Index k = 0; k <= i; ++k)
            acc += factor(i, k) * z(k);
        out(i) = acc;
    }
    return out;
}

void require_axes(const ParamTable &table, const CorrelationMatrix &corr)
{
    const bool angular = table.asa.has_value() && table.zsa.has_value();
    if (table.asa.has_value() != table.zsa.has_value())
        throw DomainError("table must carry both or neither of the ASA/ZSA moments");
    const std::vector<std::string> want =
        angular ? std::vector<std::string>{"SF", "DS", "ASA", "ZSA"} : std::vector<std::string>{"SF", "DS"};
    if (corr.labels() != want)
        throw DomainError(angular ? "correlation axes must be [SF, DS, ASA, ZSA] for this table"
                                  : "correlation axes must be [SF, DS] for this table");
}

} // namespace

// ---- LspSampler -------------------------------------------------------------------

LspSampler::LspSampler(ParamTable table, const CorrelationMatrix &corr, ShadowModel shadow)
    : table_(std::move(table)), shadow_(shadow)
{
    require_axes(table_, corr);
    factor_ = psd_cholesky(corr.values());
}

LspVector LspSampler::sample(double distance_m, Rng &rng) const
{
    const Eigen::VectorXd w = correlate(factor_, standard_normals(factor_.rows(), rng));
    LspVector v;
    v.sf_db = shadow_sigma_db(shadow_, distance_m) * w(0);
    v.ds_log10s = table_.ds.mu + table_.ds.sigma * w(1);
    if (table_.asa)
    {
        v.asa_log10deg = table_.asa->mu + table_.asa->sigma * w(2);
        v.zsa_log10deg = table_.zsa->mu + table_.zsa->sigma * w(3);
    }
    return v;
}

LspVector sample_lsp(const ParamTable &table, const CorrelationMatrix &corr, const ShadowModel &shadow,
                     double distance_m, Rng &rng)
{
    return LspSampler(table, corr, shadow).sample(distance_m, rng);
}

// ---- ZSA mixture ------------------------------------------------------------------

double ZsaMixture::pooled_mu() const { return weight1 * mode1_mu + (1.0 - weight1) * mode2_mu; }

double ZsaMixture::between_variance() const
{
    const double mu = pooled_mu();
    return weight1 * (mode1_mu - mu) * (mode1_mu - mu) + (1.0 - weight1) * (mode2_mu - mu) * (mode2_mu - mu);
}

double ZsaMixture::pooled_sigma() const
{
    return std::sqrt(component_sigma * component_sigma + between_variance());
}

double ZsaMixture::sample(double z, Rng &rng) const
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double mode = u(rng) < weight1 ? mode1_mu : mode2_mu;
    return mode + component_sigma * z;
}

ZsaMixture calibrate_zsa_mixture(const ParamTable &table)
{
    if (!table.zsa)
        throw DomainError("table has no ZSA moments to calibrate against");
    ZsaMixture m;
    const double gap = std::abs(m.pooled_mu() - table.zsa->mu);
    if (gap > kZsaMixtureMeanTolerance)
        throw CalibrationError("two-mode ZSA pooled mean " + std::to_string(m.pooled_mu()) + " is " +
                               std::to_string(gap) + " from the table mean " + std::to_string(table.zsa->mu));
    m.component_sigma = std::sqrt(std::max(0.0, table.zsa->sigma * table.zsa->sigma - m.between_variance()));
    return m;
}

// ---- MultiBandSampler -------------------------------------------------------------

MultiBandSampler::MultiBandSampler(std::vector<Band> bands, std::vector<ParamTable> tables,
                                   const std::vector<CorrelationMatrix> &param_corr,
                                   const CorrelationMatrix &interfreq_ds, const CorrelationMatrix &interfreq_sf,
                                   const JointOptions &options)
    : bands_(std::move(bands)), tables_(std::move(tables)),
      raw_(build_joint_correlation(bands_, param_corr, interfreq_ds, interfreq_sf, options)),
      repair_(nearest_correlation(raw_))
{
    if (tables_.size() != bands_.size())
        throw DomainError("one parameter table per band required");
    for (std::size_t i = 0; i < bands_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (bands_[i] == bands_[j])
                throw DomainError("duplicate band in multi-band request");
    std::size_t offset = 0;
    for (std::size_t b = 0; b < bands_.size(); ++b)
    {
        require_axes(tables_[b], param_corr[b]);
        offsets_.push_back(offset);
        offset += param_corr[b].size();
    }
    factor_ = psd_cholesky(repair_.matrix.values());
}

MultiBandSampler MultiBandSampler::from_registry(std::vector<Band> bands, ChannelState state,
                                                 const ModelRegistry &registry, const JointOptions &options)
{
    std::vector<ParamTable> tables;
    std::vector<CorrelationMatrix> corr;
    for (Band b : bands)
    {
        tables.push_back(registry.table(b, state));
        corr.push_back(registry.cross_corr(b, state));
    }
    return MultiBandSampler(std::move(bands), std::move(tables), corr, registry.interfreq(InterFreqParam::DS, state),
                            registry.interfreq(InterFreqParam::SF, state), options);
}

std::vector<BandNormals> MultiBandSampler::draw_normals(Rng &rng) const
{
    const Eigen::VectorXd w = correlate(factor_, standard_normals(factor_.rows(), rng));
    std::vector<BandNormals> out(bands_.size());
    for (std::size_t b = 0; b < bands_.size(); ++b)
    {
        const auto o = static_cast<Eigen::Index>(offsets_[b]);
        out[b].sf = w(o);
        out[b].ds = w(o + 1);
        if (tables_[b].asa)
        {
            out[b].asa = w(o + 2);
            out[b].zsa = w(o + 3);
        }
    }
    return out;
}

std::vector<LspVector> MultiBandSampler::sample(std::span<const ShadowModel> shadows, double distance_m,
                                                Rng &rng) const
{
    if (shadows.size() != bands_.size())
        throw DomainError("one shadow model per band required");
    const auto normals = draw_normals(rng);
    std::vector<LspVector> out(bands_.size());
    for (std::size_t b = 0; b < bands_.size(); ++b)
    {
        const ParamTable &t = tables_[b];
        out[b].sf_db = shadow_sigma_db(shadows[b], distance_m) * normals[b].sf;
        out[b].ds_log10s = t.ds.mu + t.ds.sigma * normals[b].ds;
        if (t.asa)
        {
            out[b].asa_log10deg = t.asa->mu + t.asa->sigma * *normals[b].asa;
            out[b].zsa_log10deg = t.zsa->mu + t.zsa->sigma * *normals[b].zsa;
        }
    }
    return out;
}

// ---- Generator config -------------------------------------------------------------

void GeneratorConfig::validate() const
{
    if (bands.empty())
        throw ConfigError("at least one band is required");
    for (std::size_t i = 0; i < bands.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (bands[i] == bands[j])
                throw ConfigError("band " + std::string(band_label(bands[i])) + " listed twice");
    if (n_drops < 1)
        throw ConfigError("number of drops must be at least 1");
    if (!(d_min_m >= 1.0))
        throw ConfigError("minimum distance must be at least 1 m");
    if (!(d_max_m > d_min_m) || !std::isfinite(d_max_m))
        throw ConfigError("maximum distance must exceed the minimum distance");
    if (!(sigma_min_db > 0.0))
        throw ConfigError("shadow sigma floor must be positive");
    if (!(std::abs(asa_zsa_interfreq_corr) <= 1.0))
        throw ConfigError("ASA/ZSA inter-frequency correlation must lie in [-1, 1]");
    if (!(nlos_sigma_coeff_db > 0.0))
        throw ConfigError("NLOS shadow coefficient must be positive");
    if (workers < 1)
        throw ConfigError("worker count must be at least 1");
}

namespace
{

JointOptions joint_options(const GeneratorConfig &config)
{
    return {config.asa_zsa_interfreq_corr, config.cross_terms};
}

std::vector<ShadowModel> shadows_for(const GeneratorConfig &config, std::span<const ParamTable> tables)
{
    std::vector<ShadowModel> out;
    for (const auto &t : tables)
    {
        if (config.state == ChannelState::NLOS && config.nlos_shadow == NlosShadow::DistanceScaled)
            out.push_back(ShadowModel::distance_scaled(config.nlos_sigma_coeff_db, config.sigma_min_db));
        else
            out.push_back(ShadowModel::constant(t.sigma_s_db));
    }
    return out;
}

} // namespace

std::vector<LspVector> sample_multiband(std::span<const ParamTable> tables,
                                        std::span<const CorrelationMatrix> param_corr,
                                        const CorrelationMatrix &interfreq_ds, const CorrelationMatrix &interfreq_sf,
                                        const GeneratorConfig &config, double distance_m, Rng &rng)
{
    if (tables.size() != config.bands.size())
        throw DomainError("one parameter table per configured band required");
    const MultiBandSampler sampler(config.bands, {tables.begin(), tables.end()}, {param_corr.begin(), param_corr.end()},
                                   interfreq_ds, interfreq_sf, joint_options(config));
    const auto shadows = shadows_for(config, tables);
    return sampler.sample(shadows, distance_m, rng);
}

// ---- DropGenerator ----------------------------------------------------------------

DropGenerator::DropGenerator(GeneratorConfig config, const ModelRegistry &registry)
    : config_((config.validate(), std::move(config))),
      sampler_(MultiBandSampler::from_registry(config_.bands, config_.state, registry, joint_options(config_)))
{
    for (Band b : config_.bands)
    {
        los_tables_.push_back(registry.table(b, ChannelState::LOS));
        nlos_tables_.push_back(registry.table(b, ChannelState::NLOS));
        std::optional<ZsaMixture> mix;
        const ParamTable &t = registry.table(b, config_.state);
        if (config_.zsa_mixture_enabled && t.zsa)
        {
            try
            {
                mix = calibrate_zsa_mixture(t);
            }
            catch (const CalibrationError &)
            {
                // Single log-normal for tables the two-mode fit does not describe.
            }
        }
        mixtures_.push_back(mix);
    }
}

DropRecord DropGenerator::make_drop(std::uint64_t drop_id) const
{
    Rng rng = make_substream(config_.seed, drop_id);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    DropRecord rec;
    rec.drop_id = drop_id;
    rec.state = config_.state;
    rec.distance_m = config_.d_min_m * std::pow(config_.d_max_m / config_.d_min_m, unit(rng));
    const double d = rec.distance_m;

    const auto normals = sampler_.draw_normals(rng);
    const auto &tables = sampler_.tables();
    for (std::size_t b = 0; b < config_.bands.size(); ++b)
    {
        const ParamTable &t = tables[b];
        const PathLossModel los = PathLossModel::from_table(los_tables_[b]);
        const PathLossModel nlos = PathLossModel::from_table(nlos_tables_[b]);

        BandDraw bd;
        bd.band = config_.bands[b];
        if (config_.state == ChannelState::LOS)
        {
            bd.median_pl_db = path_loss_db(los, d);
            bd.pl_branch = ChannelState::LOS;
        }
        else if (config_.two_slope)
        {
            const TwoSlopeResult ts = two_slope_nlos(los, nlos, d);
            bd.median_pl_db = ts.pl_db;
            bd.pl_branch = ts.branch;
        }
        else
        {
            bd.median_pl_db = path_loss_db(nlos, d);
            bd.pl_branch = ChannelState::NLOS;
        }

        // Shadowing follows the branch that set the median.
        double sigma = 0.0;
        if (bd.pl_branch == ChannelState::LOS)
            sigma = los_tables_[b].sigma_s_db;
        else if (config_.nlos_shadow == NlosShadow::DistanceScaled)
            sigma = shadow_sigma_db(ShadowModel::distance_scaled(config_.nlos_sigma_coeff_db, config_.sigma_min_db), d);
        else
            sigma = nlos_tables_[b].sigma_s_db;

        bd.lsp.sf_db = sigma * normals[b].sf;
        bd.lsp.ds_log10s = t.ds.mu + t.ds.sigma * normals[b].ds;
        if (t.asa)
        {
            bd.lsp.asa_log10deg = t.asa->mu + t.asa->sigma * *normals[b].asa;
            bd.lsp.zsa_log10deg = mixtures_[b] ? mixtures_[b]->sample(*normals[b].zsa, rng)
                                               : t.zsa->mu + t.zsa->sigma * *normals[b].zsa;
        }
        bd.pl_db = bd.median_pl_db + bd.lsp.sf_db;
        const double tau = std::pow(10.0, bd.lsp.ds_log10s);
        bd.bc90_hz = coherence_bandwidth(tau, CoherenceLevel::R90);
        bd.bc50_hz = coherence_bandwidth(tau, CoherenceLevel::R50);
        rec.bands.push_back(std::move(bd));
    }
    return rec;
}

void DropGenerator::generate(const std::function<void(const DropRecord &)> &sink) const
{
    constexpr std::uint64_t chunk = 4096;
    const unsigned workers = std::max(1u, config_.workers);
    std::vector<DropRecord> buffer;
    for (std::uint64_t begin = 0; begin < config_.n_drops; begin += chunk)
    {
        const std::uint64_t end = std::min(config_.n_drops, begin + chunk);
        buffer.assign(end - begin, DropRecord{});
        if (workers == 1)
        {
            for (std::uint64_t id = begin; id < end; ++id)
                buffer[id - begin] = make_drop(id);
        }
        else
        {
            // Strided split; each slot is written by exactly one thread.
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    for (std::uint64_t id = begin + w; id < end; id += workers)
                        buffer[id - begin] = make_drop(id);
                });
        }
        for (const auto &rec : buffer)
            sink(rec);
    }
}

std::vector<DropRecord> DropGenerator::generate() const
{
    std::vector<DropRecord> out;
    out.reserve(config_.n_drops);
    generate([&](const DropRecord &r) { out.push_back(r); });
    return out;
}

std::vector<DropRecord> generate_drops(const GeneratorConfig &config, const ModelRegistry &registry)
{
    return DropGenerator(config, registry).generate();
}

// ---- Synthetic tap sets -----------------------------------------------------------

namespace
{

double wrap_deg(double a)
{
    a = std::fmod(a + 180.0, 360.0);
    if (a < 0.0)
        a += 360.0;
    return a - 180.0;
}

double snap(double value, double grid) { return std::round(value / grid) * grid; }

} // namespace

TapSet synth_tap_set(double target_ds_s, double target_asa_deg, double target_zsa_deg, std::size_t n_taps,
                     double grid_s, Rng &rng)
{
    if (!(target_ds_s > 0.0))
        throw DomainError("target delay spread must be positive");
    if (n_taps < 2)
        throw DomainError("synthetic tap sets need at least two taps");
    if (!(grid_s > 0.0))
        throw DomainError("delay grid must be positive");
    if (!(target_asa_deg >= 0.0) || !(target_zsa_deg >= 0.0))
        throw DomainError("target angular spreads must be non-negative");

    constexpr double deg = std::numbers::pi / 180.0;
    std::vector<Tap> taps;

    if (n_taps == 2)
    {
        if (target_asa_deg >= 90.0 || target_zsa_deg >= 90.0)
            throw DomainError("two-tap fixtures support angular spreads below 90 deg");
        const double half = std::max(grid_s, snap(target_ds_s, grid_s));
        if (2.0 * half > kMaxExcessDelayS)
            throw DomainError("target delay spread exceeds the measurable excess delay");
        const double phi = std::acos(std::exp(-0.5 * std::pow(target_asa_deg * deg, 2))) / deg;
        const double theta = std::acos(std::exp(-0.5 * std::pow(target_zsa_deg * deg, 2))) / deg;
        taps.push_back({0.0, 1.0, -phi, -theta});
        taps.push_back({2.0 * half, 1.0, phi, theta});
        return TapSet(taps);
    }

    const double span = std::min(kMaxExcessDelayS, 20.0 * target_ds_s);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    taps.reserve(n_taps);
    for (std::size_t i = 0; i < n_taps; ++i)
    {
        const double u = (static_cast<double>(i) + unit(rng)) / static_cast<double>(n_taps);
        const double delay = std::min(snap(u * span, grid_s), kMaxExcessDelayS);
        const double power = std::exp(-delay / target_ds_s);
        const double az = wrap_deg(target_asa_deg * normal(rng));
        const double zen = wrap_deg(target_zsa_deg * normal(rng));
        taps.push_back({delay, power, az, zen});
    }
    return TapSet(taps);
}

} // namespace fr3
