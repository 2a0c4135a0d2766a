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

#ifndef FR3_ESTIMATOR_HPP
#define FR3_ESTIMATOR_HPP

// Fitting side: measurement records in, model coefficients out.

#include "fr3/dispersion.hpp"
#include "fr3/model_params.hpp"
#include "fr3/records.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fr3
{

// ---- PDP / beams ------------------------------------------------------------------

inline constexpr double kPdpThresholdDb = 15.0;

struct PdpTap
{
    double delay_s = 0.0;
    double power_db = 0.0;

    bool operator==(const PdpTap &) const = default;
};

// Delays strictly increasing and <= 8 us (checked by validate()).
struct Pdp
{
    std::vector<PdpTap> taps;
    double noise_floor_mean_db = 0.0;

    void validate() const;
    bool operator==(const Pdp &) const = default;
};

// Keeps taps with power_db >= noise + 15 dB. May return no taps.
Pdp threshold_pdp(const Pdp &pdp);

// Linear-power tap set from a PDP (no angles). DomainError if empty.
TapSet pdp_to_taps(const Pdp &pdp);

struct Beam
{
    double azimuth_deg = 0.0;
    double zenith_deg = 0.0;
    double power = 0.0; // linear
};

// Sum of beam powers. DomainError for an empty set.
double synth_omni_power(std::span<const Beam> beams);

// One tap per beam at its boresight (delay 0), for angular spreads.
TapSet beams_to_taps(std::span<const Beam> beams);

// ---- Regression -------------------------------------------------------------------

struct PathLossSample
{
    double distance_m = 0.0;
    double path_loss_db = 0.0;
    ChannelState state = ChannelState::LOS;
    Band band = Band::B6_9;
};

struct FitResult
{
    double pl0_db = 0.0;
    double ple = 0.0;
    double sigma_s_db = 0.0; // residual std, n-2 denominator
    std::vector<double> residuals_db;
    std::size_t n = 0;
};

// OLS of path loss on 10 log10(d / 1 m). Needs >= 3 samples (DomainError) and two
// distinct distances (RankDeficiencyError).
FitResult fit_path_loss(std::span<const PathLossSample> samples);
FitResult fit_path_loss(std::span<const double> distances_m, std::span<const double> path_loss_db);

// Sample mean / std (n-1) of log10(values). Needs >= 2 positive values.
LogMoments fit_lognormal(std::span<const double> values);

// Same, for values already in log10 units.
LogMoments log_moments(std::span<const double> log10_values);

// ML scale of S_i ~ N(0, a log10 d_i): a = sqrt(mean((s_i / log10 d_i)^2)).
// DomainError for any d <= 1 m or length mismatch.
double fit_distance_sigma(std::span<const double> residuals_db, std::span<const double> distances_m);

// Sample Pearson correlation. Needs equal lengths >= 3 and nonzero variances.
double pearson(std::span<const double> x, std::span<const double> y);

// ---- Probability plots ------------------------------------------------------------

double normal_quantile(double p);

struct QqPoint
{
    double theoretical_quantile = 0.0;
    double ordered_value = 0.0;
};

// Sorted values against Phi^-1((i - 0.5) / n). Needs >= 2 values.
std::vector<QqPoint> probability_plot_points(std::span<const double> values);

// Least-squares slope of ordered value on quantile.
double qq_slope(std::span<const QqPoint> points);

// ---- Record-file fits -------------------------------------------------------------

inline constexpr std::size_t kMinGroupSamples = 3;

// Everything fitted for one (band, state) group.
struct GroupFit
{
    Band band;
    ChannelState state;
    FitResult path_loss;
    std::optional<double> distance_sigma_db; // over samples with d > 1 m
    LogMoments ds;
    std::optional<LogMoments> asa;
    std::optional<LogMoments> zsa;
    // Over [SF, DS] or [SF, DS, ASA, ZSA]; SF is the regression residual. NaN where
    // a variance vanishes.
    std::vector<std::string> corr_labels;
    Eigen::MatrixXd corr;
};

struct InterFreqFit
{
    ChannelState state;
    Lsp lsp; // SF or DS
    Band band_a;
    Band band_b;
    double r = 0.0;
    std::size_t n = 0; // drops present on both bands
};

struct FitReport
{
    std::vector<GroupFit> groups;           // ordered by (band, state)
    std::vector<InterFreqFit> interfreq;    // pairs matched by drop_id
    std::vector<std::string> warnings;      // skipped groups
};

FitReport fit_records(std::span<const Record> records);

} // namespace fr3

#endif
