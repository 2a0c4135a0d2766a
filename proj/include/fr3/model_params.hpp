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

#ifndef FR3_MODEL_PARAMS_HPP
#define FR3_MODEL_PARAMS_HPP

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fr3
{

// The three measured carrier bands.
enum class Band
{
    B6_9,
    B8_3,
    B14_5
};

enum class ChannelState
{
    LOS,
    NLOS
};

inline constexpr std::array<Band, 3> kAllBands{Band::B6_9, Band::B8_3, Band::B14_5};
inline constexpr std::array<ChannelState, 2> kAllStates{ChannelState::LOS, ChannelState::NLOS};

double center_frequency_hz(Band band);

// "6.9", "8.3", "14.5" -- the wire spelling.
std::string_view band_label(Band band);
std::optional<Band> parse_band(std::string_view text);

// "LOS" / "NLOS"
std::string_view state_label(ChannelState state);
std::optional<ChannelState> parse_state(std::string_view text);

// Only 8.3 and 14.5 GHz were measured with phased arrays; 6.9 GHz is omni-only
// and has no angular statistics.
bool band_has_arrays(Band band);

// Mean and standard deviation of log10 of a log-normal quantity.
struct LogMoments
{
    double mu = 0.0;
    double sigma = 0.0;

    bool operator==(const LogMoments &) const = default;
};

// Large-scale model coefficients for one (band, state).
struct ParamTable
{
    double pl0_db = 0.0;     // intercept at d0 = 1 m
    double ple = 0.0;        // path loss exponent
    double sigma_s_db = 0.0; // shadow fading std
    LogMoments ds;           // log10(tau_rms / 1 s)
    double bc50_hz = 0.0;    // coherence bandwidth, rho = 0.5
    double bc90_hz = 0.0;    // coherence bandwidth, rho = 0.9
    std::optional<LogMoments> asa; // log10(ASA / 1 deg)
    std::optional<LogMoments> zsa; // log10(ZSA / 1 deg)

    bool operator==(const ParamTable &) const = default;
};

// Large-scale parameter axes. Correlation matrices over LSPs always use this order.
enum class Lsp
{
    SF,
    DS,
    ASA,
    ZSA
};

std::string_view lsp_label(Lsp lsp);

// Symmetric, unit-diagonal matrix with entries in [-1, 1] over labelled axes.
// The constructor enforces those invariants (to 1e-12) and throws DomainError.
class CorrelationMatrix
{
public:
    CorrelationMatrix(std::vector<std::string> labels, Eigen::MatrixXd values);

    static CorrelationMatrix identity(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string> &labels() const { return labels_; }
    const Eigen::MatrixXd &values() const { return values_; }

    double operator()(std::size_t row, std::size_t col) const { return values_(row, col); }

    // Entry by axis label; throws DomainError for an unknown label.
    double at(std::string_view row, std::string_view col) const;

    std::optional<std::size_t> index_of(std::string_view label) const;

    bool operator==(const CorrelationMatrix &other) const;

private:
    std::vector<std::string> labels_;
    Eigen::MatrixXd values_;
};

// The measured coefficients. Delay-spread moments are stored at two-decimal precision.
ParamTable builtin_table(Band band, ChannelState state);

// Per-band LSP cross-correlations: axes [SF, DS, ASA, ZSA], or [SF, DS] at 6.9 GHz.
CorrelationMatrix cross_corr_matrix(Band band, ChannelState state);

enum class InterFreqParam
{
    DS,
    SF
};

// 3x3 correlation of one LSP across the bands, axes ["6.9", "8.3", "14.5"].
CorrelationMatrix interfreq_corr_matrix(InterFreqParam param, ChannelState state);

// One failed self-consistency check.
struct Finding
{
    std::string check;   // "bc50", "bc90", "fspl", "structure"
    double deviation;    // relative for B_c checks, dB for FSPL
    double limit;
    std::string message;
};

inline constexpr double kBcRelativeTolerance = 0.10;
inline constexpr double kFsplInterceptToleranceDb = 1.0;

// Audits a table: B_c entries against 1/(K * 10^mu) and, for LOS, the intercept
// against free-space loss at 1 m. Empty result means consistent.
std::vector<Finding> validate_table(const ParamTable &table, Band band, ChannelState state);

// The same audit with the measured values (not thresholds) exposed, for reporting.
struct ConsistencyReport
{
    double bc50_predicted_hz;
    double bc90_predicted_hz;
    double bc50_relative_deviation;
    double bc90_relative_deviation;
    std::optional<double> fspl_gap_db; // LOS only
};
ConsistencyReport consistency_report(const ParamTable &table, Band band, ChannelState state);

// Read-only lookup of tables and correlation structures, optionally with
// replaced parameter tables (from an override file).
class ModelRegistry
{
public:
    static ModelRegistry builtin();

    const ParamTable &table(Band band, ChannelState state) const;
    const CorrelationMatrix &cross_corr(Band band, ChannelState state) const;
    const CorrelationMatrix &interfreq(InterFreqParam param, ChannelState state) const;

    // Replace one parameter table. Angular presence must still match the band.
    void set_table(Band band, ChannelState state, ParamTable table);

private:
    ModelRegistry() = default;

    std::map<std::pair<Band, ChannelState>, ParamTable> tables_;
    std::map<std::pair<Band, ChannelState>, CorrelationMatrix> cross_;
    std::map<std::pair<InterFreqParam, ChannelState>, CorrelationMatrix> interfreq_;
};

} // namespace fr3

#endif
