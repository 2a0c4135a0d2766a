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

#ifndef FR3_LSP_GEN_HPP
#define FR3_LSP_GEN_HPP

// Correlated large-scale parameter generation.
//
// Every LSP is Gaussian in its log domain: SF in dB, DS as log10(tau_rms / 1 s),
// ASA/ZSA as log10(angle / 1 deg). A standard normal vector is correlated through a
// lower-triangular factor of the (PSD-repaired) correlation matrix and then mapped
// to each marginal.
//
// Drops are reproducible: drop i draws from its own substream keyed by (seed, i),
// so results do not depend on worker count or evaluation order.

#include "fr3/dispersion.hpp"
#include "fr3/model_params.hpp"
#include "fr3/propagation.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace fr3
{

using Rng = std::mt19937_64;

// Independent generator for (seed, stream_id).
Rng make_substream(std::uint64_t seed, std::uint64_t stream_id);

// ---- Correlation repair -----------------------------------------------------------

inline constexpr double kPsdTolerance = 1e-10;
inline constexpr int kMaxRepairIterations = 100;

double min_eigenvalue(const Eigen::MatrixXd &symmetric);

struct RepairResult
{
    CorrelationMatrix matrix;
    double max_abs_change = 0.0; // largest |output - input| entry
    int iterations = 0;          // 0 when the input was already PSD
};

// Returns the input unchanged when its smallest eigenvalue is >= -1e-10. Otherwise clips
// negative eigenvalues to 0 and rescales to unit diagonal, repeating until PSD.
// Throws NumericError after kMaxRepairIterations.
RepairResult nearest_correlation(const CorrelationMatrix &matrix);

// Lower-triangular L with L L^T = A for a symmetric PSD matrix. Null directions get zero
// columns. Throws DomainError when A is not PSD (negative pivot beyond tolerance).
Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd &a, double tol = kPsdTolerance);

// ---- Single-band sampling ---------------------------------------------------------

struct LspVector
{
    double sf_db = 0.0;
    double ds_log10s = 0.0;
    std::optional<double> asa_log10deg;
    std::optional<double> zsa_log10deg;

    bool operator==(const LspVector &) const = default;
};

// Draws LSP vectors for one (band, state). The correlation axes must be [SF, DS] for a
// table without angular moments and [SF, DS, ASA, ZSA] otherwise.
class LspSampler
{
public:
    LspSampler(ParamTable table, const CorrelationMatrix &corr, ShadowModel shadow);

    LspVector sample(double distance_m, Rng &rng) const;

    const Eigen::MatrixXd &factor() const { return factor_; }

private:
    ParamTable table_;
    ShadowModel shadow_;
    Eigen::MatrixXd factor_;
};

LspVector sample_lsp(const ParamTable &table, const CorrelationMatrix &corr, const ShadowModel &shadow,
                     double distance_m, Rng &rng);

// ---- Two-mode ZSA -----------------------------------------------------------------

inline constexpr double kZsaMixtureMeanTolerance = 0.02;

// Two log-normal components with equal spread; mode means are 10^(log-mean).
struct ZsaMixture
{
    double weight1 = 2.0 / 3.0;
    double mode1_mu = 1.0;                  // log10(10 deg)
    double mode2_mu = 1.1139433523068367;   // log10(13 deg)
    double component_sigma = 0.0;

    double pooled_mu() const;
    double between_variance() const;
    double pooled_sigma() const;

    // Picks a mode with probability weight1 / (1 - weight1) and returns
    // mode_mu + component_sigma * z, for a (possibly correlated) standard normal z.
    double sample(double z, Rng &rng) const;
};

// Moment-matches the mixture spread to the table's ZSA sigma. Throws CalibrationError
// if the pooled mean is more than 0.02 from the table's ZSA mean, DomainError if the
// table has no ZSA moments.
ZsaMixture calibrate_zsa_mixture(const ParamTable &table);

// ---- Multi-band sampling ----------------------------------------------------------

// How to fill the joint-matrix entries between different LSPs on different bands,
// which were never measured.
enum class CrossTermRule
{
    // Average of the two one-hop paths: r(X_a, Y_b) = (r(X_a,Y_a) r(Y_a,Y_b) + r(X_a,X_b) r(X_b,Y_b)) / 2.
    Product,
    // Plain zero.
    Zero
};

struct JointOptions
{
    double asa_zsa_interfreq_corr = 0.0; // corr(ASA_a, ASA_b) and corr(ZSA_a, ZSA_b), a != b
    CrossTermRule cross_terms = CrossTermRule::Product;
};

// Block correlation over (band x LSP) axes labelled "SF@6.9", "DS@8.3", ...
// Per-band blocks come from param_corr; same-LSP cross-band entries from the
// inter-frequency matrices (DS, SF) or options (ASA, ZSA). Not repaired.
CorrelationMatrix build_joint_correlation(std::span<const Band> bands, std::span<const CorrelationMatrix> param_corr,
                                          const CorrelationMatrix &interfreq_ds,
                                          const CorrelationMatrix &interfreq_sf, const JointOptions &options);

// Correlated standard normals for one band, by LSP.
struct BandNormals
{
    double sf = 0.0;
    double ds = 0.0;
    std::optional<double> asa;
    std::optional<double> zsa;
};

class MultiBandSampler
{
public:
    MultiBandSampler(std::vector<Band> bands, std::vector<ParamTable> tables,
                     const std::vector<CorrelationMatrix> &param_corr, const CorrelationMatrix &interfreq_ds,
                     const CorrelationMatrix &interfreq_sf, const JointOptions &options);

    static MultiBandSampler from_registry(std::vector<Band> bands, ChannelState state, const ModelRegistry &registry,
                                          const JointOptions &options);

    const std::vector<Band> &bands() const { return bands_; }
    const std::vector<ParamTable> &tables() const { return tables_; }
    const CorrelationMatrix &joint_raw() const { return raw_; }
    const RepairResult &repair() const { return repair_; }
    const CorrelationMatrix &joint() const { return repair_.matrix; }

    std::vector<BandNormals> draw_normals(Rng &rng) const;

    // Full LSP vectors with one shadow model per band (same order as bands()).
    std::vector<LspVector> sample(std::span<const ShadowModel> shadows, double distance_m, Rng &rng) const;

private:
    std::vector<Band> bands_;
    std::vector<ParamTable> tables_;
    std::vector<std::size_t> offsets_; // first joint axis of each band
    CorrelationMatrix raw_;
    RepairResult repair_;
    Eigen::MatrixXd factor_;
};

// ---- Drop generation --------------------------------------------------------------

enum class NlosShadow
{
    Table,         // constant sigma_S from the table
    DistanceScaled // sigma(d) = coeff * log10(d), floored at sigma_min
};

struct GeneratorConfig
{
    std::vector<Band> bands{kAllBands.begin(), kAllBands.end()};
    ChannelState state = ChannelState::LOS;
    std::uint64_t n_drops = 1;
    double d_min_m = 1.0;
    double d_max_m = 50.0;
    std::uint64_t seed = 0;
    bool zsa_mixture_enabled = false;
    double sigma_min_db = kDefaultSigmaMinDb;
    double asa_zsa_interfreq_corr = 0.0;
    bool two_slope = true; // NLOS path loss floored by the LOS curve
    NlosShadow nlos_shadow = NlosShadow::Table;
    double nlos_sigma_coeff_db = 6.5;
    CrossTermRule cross_terms = CrossTermRule::Product;
    unsigned workers = 1;

    // Throws ConfigError.
    void validate() const;
};

std::vector<LspVector> sample_multiband(std::span<const ParamTable> tables,
                                        std::span<const CorrelationMatrix> param_corr,
                                        const CorrelationMatrix &interfreq_ds, const CorrelationMatrix &interfreq_sf,
                                        const GeneratorConfig &config, double distance_m, Rng &rng);

struct BandDraw
{
    Band band;
    LspVector lsp;
    double pl_db = 0.0;        // median + shadow fading
    double median_pl_db = 0.0; // before shadow fading
    ChannelState pl_branch = ChannelState::LOS; // branch that set the median (two-slope)
    double bc90_hz = 0.0;
    double bc50_hz = 0.0;
};

struct DropRecord
{
    std::uint64_t drop_id = 0;
    double distance_m = 0.0;
    ChannelState state = ChannelState::LOS;
    std::vector<BandDraw> bands;
};

class DropGenerator
{
public:
    DropGenerator(GeneratorConfig config, const ModelRegistry &registry);

    const GeneratorConfig &config() const { return config_; }
    const MultiBandSampler &sampler() const { return sampler_; }

    // Pure function of (config, registry, drop_id).
    DropRecord make_drop(std::uint64_t drop_id) const;

    // Emits drops in drop_id order; work is split over config.workers threads.
    void generate(const std::function<void(const DropRecord &)> &sink) const;
    std::vector<DropRecord> generate() const;

private:
    GeneratorConfig config_;
    std::vector<ParamTable> los_tables_;
    std::vector<ParamTable> nlos_tables_;
    std::vector<std::optional<ZsaMixture>> mixtures_;
    MultiBandSampler sampler_;
};

std::vector<DropRecord> generate_drops(const GeneratorConfig &config, const ModelRegistry &registry);

// ---- Synthetic tap sets -----------------------------------------------------------

// Estimator fixtures with known spreads.
//
// n_taps == 2: equal powers at tau_m +- target_ds (snapped to the grid, tau_m = the
// snapped target), angles at +-phi with phi = acos(exp(-target^2 / 2)) so the two-tap
// circular spread equals the target exactly. Targets >= 90 deg are rejected.
// n_taps > 2: stratified delays over [0, min(8 us, 20 target_ds)] with exponentially
// decaying power (rms -> target_ds) and wrapped-normal angles with spread parameter
// equal to the targets.
TapSet synth_tap_set(double target_ds_s, double target_asa_deg, double target_zsa_deg, std::size_t n_taps,
                     double grid_s, Rng &rng);

} // namespace fr3

#endif
