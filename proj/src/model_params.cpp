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

#include "fr3/model_params.hpp"

#include "fr3/dispersion.hpp"
#include "fr3/error.hpp"
#include "fr3/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fr3
{

double center_frequency_hz(Band band)
{
    switch (band)
    {
    case Band::B6_9:
        return 6.9e9;
    case Band::B8_3:
        return 8.3e9;
    case Band::B14_5:
        return 14.5e9;
    }
    throw DomainError("unknown band");
}

std::string_view band_label(Band band)
{
    switch (band)
    {
    case Band::B6_9:
        return "6.9";
    case Band::B8_3:
        return "8.3";
    case Band::B14_5:
        return "14.5";
    }
    throw DomainError("unknown band");
}

std::optional<Band> parse_band(std::string_view text)
{
    for (Band b : kAllBands)
        if (text == band_label(b))
            return b;
    return std::nullopt;
}

std::string_view state_label(ChannelState state) { return state == ChannelState::LOS ? "LOS" : "NLOS"; }

std::optional<ChannelState> parse_state(std::string_view text)
{
    if (text == "LOS")
        return ChannelState::LOS;
    if (text == "NLOS")
        return ChannelState::NLOS;
    return std::nullopt;
}

bool band_has_arrays(Band band) { return band != Band::B6_9; }

std::string_view lsp_label(Lsp lsp)
{
    switch (lsp)
    {
    case Lsp::SF:
        return "SF";
    case Lsp::DS:
        return "DS";
    case Lsp::ASA:
        return "ASA";
    case Lsp::ZSA:
        return "ZSA";
    }
    throw DomainError("unknown LSP");
}

// ---- CorrelationMatrix ------------------------------------------------------------

CorrelationMatrix::CorrelationMatrix(std::vector<std::string> labels, Eigen::MatrixXd values)
    : labels_(std::move(labels)), values_(std::move(values))
{
    const auto n = static_cast<Eigen::Index>(labels_.size());
    if (n == 0)
        throw DomainError("correlation matrix needs at least one axis");
    if (values_.rows() != n || values_.cols() != n)
        throw DomainError("correlation matrix size does not match its labels");
    constexpr double tol = 1e-12;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (std::abs(values_(i, i) - 1.0) > tol)
            throw DomainError("correlation matrix diagonal must be 1 (axis " + labels_[i] + ")");
        values_(i, i) = 1.0;
        for (Eigen::Index j = 0; j < i; ++j)
        {
            const double a = values_(i, j);
            const double b = values_(j, i);
            if (!std::isfinite(a) || std::abs(a - b) > tol)
                throw DomainError("correlation matrix must be symmetric (" + labels_[i] + ", " + labels_[j] + ")");
            if (std::abs(a) > 1.0 + tol)
                throw DomainError("correlation entry outside [-1, 1] (" + labels_[i] + ", " + labels_[j] + ")");
            const double v = std::clamp(0.5 * (a + b), -1.0, 1.0);
            values_(i, j) = v;
            values_(j, i) = v;
        }
    }
    for (std::size_t i = 0; i < labels_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (labels_[i] == labels_[j])
                throw DomainError("duplicate correlation axis label " + labels_[i]);
}

CorrelationMatrix CorrelationMatrix::identity(std::vector<std::string> labels)
{
    const auto n = static_cast<Eigen::Index>(labels.size());
    return CorrelationMatrix(std::move(labels), Eigen::MatrixXd::Identity(n, n));
}

std::optional<std::size_t> CorrelationMatrix::index_of(std::string_view label) const
{
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label)
            return i;
    return std::nullopt;
}

double CorrelationMatrix::at(std::string_view row, std::string_view col) const
{
    const auto r = index_of(row);
    const auto c = index_of(col);
    if (!r || !c)
        throw DomainError("unknown correlation axis " + std::string(!r ? row : col));
    return values_(static_cast<Eigen::Index>(*r), static_cast<Eigen::Index>(*c));
}

bool CorrelationMatrix::operator==(const CorrelationMatrix &other) const
{
    return labels_ == other.labels_ && values_ == other.values_;
}

// ---- Built-in tables --------------------------------------------------------------

namespace
{

constexpr double MHz = 1e6;

struct AngularRow
{
    LogMoments asa;
    LogMoments zsa;
};

// Table columns are (6.9 LOS, 6.9 NLOS, 8.3 LOS, 8.3 NLOS, 14.5 LOS, 14.5 NLOS).
std::size_t column(Band band, ChannelState state)
{
    return static_cast<std::size_t>(band) * 2 + (state == ChannelState::NLOS ? 1 : 0);
}

constexpr std::array<double, 6> kPl0{48.3, 42.6, 51.1, 45.0, 56.6, 51.4};
constexpr std::array<double, 6> kPle{1.5, 3.2, 1.4, 3.2, 1.5, 3.4};
constexpr std::array<double, 6> kSigmaS{2.9, 6.6, 2.6, 6.6, 2.3, 7.3};
constexpr std::array<double, 6> kDsMu{-7.92, -7.60, -7.88, -7.58, -7.94, -7.59};
constexpr std::array<double, 6> kDsSigma{0.34, 0.23, 0.34, 0.21, 0.34, 0.22};
constexpr std::array<double, 6> kBc50{16.5, 8.0, 15.0, 7.6, 17.3, 7.8};
constexpr std::array<double, 6> kBc90{1.7, 0.8, 1.5, 0.7, 1.7, 0.7};

// Indexed by column(); 6.9 GHz entries unused.
const std::array<AngularRow, 6> kAngular{{
    {},
    {},
    {{1.71, 0.13}, {1.24, 0.03}},
    {{1.84, 0.13}, {1.22, 0.03}},
    {{1.55, 0.15}, {1.04, 0.06}},
    {{1.77, 0.15}, {1.03, 0.07}},
}};

struct CrossRow
{
    double asa_ds, asa_sf, ds_sf, zsa_sf, zsa_ds, zsa_asa;
};

const std::array<CrossRow, 6> kCross{{
    {0.0, 0.0, -0.72, 0.0, 0.0, 0.0},
    {0.0, 0.0, -0.55, 0.0, 0.0, 0.0},
    {0.58, -0.66, -0.54, -0.27, 0.11, 0.24},
    {0.39, -0.42, -0.51, -0.38, -0.05, 0.18},
    {0.80, -0.47, -0.39, 0.05, 0.09, 0.01},
    {0.44, -0.34, -0.30, -0.32, -0.06, 0.12},
}};

// Inter-frequency pairs (6.9-8.3, 6.9-14.5, 8.3-14.5).
struct InterFreqRow
{
    double r_69_83, r_69_145, r_83_145;
};

InterFreqRow interfreq_row(InterFreqParam param, ChannelState state)
{
    const bool los = state == ChannelState::LOS;
    if (param == InterFreqParam::DS)
        return los ? InterFreqRow{0.37, 0.41, 0.43} : InterFreqRow{0.70, 0.70, 0.71};
    return los ? InterFreqRow{-0.08, 0.05, 0.00} : InterFreqRow{0.91, 0.86, 0.90};
}

} // namespace

ParamTable builtin_table(Band band, ChannelState state)
{
    const std::size_t c = column(band, state);
    ParamTable t;
    t.pl0_db = kPl0[c];
    t.ple = kPle[c];
    t.sigma_s_db = kSigmaS[c];
    t.ds = {kDsMu[c], kDsSigma[c]};
    t.bc50_hz = kBc50[c] * MHz;
    t.bc90_hz = kBc90[c] * MHz;
    if (band_has_arrays(band))
    {
        t.asa = kAngular[c].asa;
        t.zsa = kAngular[c].zsa;
    }
    return t;
}

CorrelationMatrix cross_corr_matrix(Band band, ChannelState state)
{
    const CrossRow &r = kCross[column(band, state)];
    if (!band_has_arrays(band))
    {
        Eigen::MatrixXd m(2, 2);
        m << 1.0, r.ds_sf, r.ds_sf, 1.0;
        return CorrelationMatrix({"SF", "DS"}, m);
    }
    Eigen::MatrixXd m(4, 4);
    // clang-format off
    m << 1.0,      r.ds_sf,  r.asa_sf,  r.zsa_sf,
         r.ds_sf,  1.0,      r.asa_ds,  r.zsa_ds,
         r.asa_sf, r.asa_ds, 1.0,       r.zsa_asa,
         r.zsa_sf, r.zsa_ds, r.zsa_asa, 1.0;
    // clang-format on
    return CorrelationMatrix({"SF", "DS", "ASA", "ZSA"}, m);
}

CorrelationMatrix interfreq_corr_matrix(InterFreqParam param, ChannelState state)
{
    const InterFreqRow r = interfreq_row(param, state);
    Eigen::MatrixXd m(3, 3);
    // clang-format off
    m << 1.0,        r.r_69_83,  r.r_69_145,
         r.r_69_83,  1.0,        r.r_83_145,
         r.r_69_145, r.r_83_145, 1.0;
    // clang-format on
    return CorrelationMatrix({"6.9", "8.3", "14.5"}, m);
}

// ---- Validation -------------------------------------------------------------------

ConsistencyReport consistency_report(const ParamTable &table, Band band, ChannelState state)
{
    const double tau = std::pow(10.0, table.ds.mu);
    ConsistencyReport r{};
    r.bc50_predicted_hz = coherence_bandwidth(tau, CoherenceLevel::R50);
    r.bc90_predicted_hz = coherence_bandwidth(tau, CoherenceLevel::R90);
    r.bc50_relative_deviation = std::abs(table.bc50_hz - r.bc50_predicted_hz) / table.bc50_hz;
    r.bc90_relative_deviation = std::abs(table.bc90_hz - r.bc90_predicted_hz) / table.bc90_hz;
    if (state == ChannelState::LOS)
        r.fspl_gap_db = std::abs(table.pl0_db - fspl_db(center_frequency_hz(band), 1.0));
    return r;
}

std::vector<Finding> validate_table(const ParamTable &table, Band band, ChannelState state)
{
    std::vector<Finding> findings;
    auto structural = [&](const std::string &msg) { findings.push_back({"structure", 0.0, 0.0, msg}); };

    if (!(table.sigma_s_db > 0.0))
        structural("sigma_s must be positive");
    if (!(table.ds.sigma > 0.0))
        structural("ds sigma must be positive");
    if (!(table.ple > 0.0))
        structural("path loss exponent must be positive");
    if (!(table.bc50_hz > table.bc90_hz && table.bc90_hz > 0.0))
        structural("coherence bandwidths must satisfy bc50 > bc90 > 0");
    const bool arrays = band_has_arrays(band);
    if (table.asa.has_value() != arrays || table.zsa.has_value() != arrays)
        structural("angular moments must be present exactly for bands measured with arrays");
    if (!findings.empty() || !(table.bc90_hz > 0.0))
        return findings;

    const ConsistencyReport r = consistency_report(table, band, state);
    auto fmt = [](double v) {
        std::ostringstream os;
        os.precision(4);
        os << v;
        return os.str();
    };
    if (r.bc50_relative_deviation > kBcRelativeTolerance)
        findings.push_back({"bc50", r.bc50_relative_deviation, kBcRelativeTolerance,
                            "B_c(0.5) table " + fmt(table.bc50_hz / MHz) + " MHz vs 1/(5 tau) = " +
                                fmt(r.bc50_predicted_hz / MHz) + " MHz"});
    if (r.bc90_relative_deviation > kBcRelativeTolerance)
        findings.push_back({"bc90", r.bc90_relative_deviation, kBcRelativeTolerance,
                            "B_c(0.9) table " + fmt(table.bc90_hz / MHz) + " MHz vs 1/(50 tau) = " +
                                fmt(r.bc90_predicted_hz / MHz) + " MHz"});
    if (r.fspl_gap_db && *r.fspl_gap_db > kFsplInterceptToleranceDb)
        findings.push_back({"fspl", *r.fspl_gap_db, kFsplInterceptToleranceDb,
                            "LOS intercept " + fmt(table.pl0_db) + " dB is " + fmt(*r.fspl_gap_db) +
                                " dB from free-space loss at 1 m"});
    return findings;
}

// ---- Registry ---------------------------------------------------------------------

ModelRegistry ModelRegistry::builtin()
{
    ModelRegistry reg;
    for (Band b : kAllBands)
        for (ChannelState s : kAllStates)
        {
            reg.tables_.emplace(std::pair{b, s}, builtin_table(b, s));
            reg.cross_.emplace(std::pair{b, s}, cross_corr_matrix(b, s));
        }
    for (InterFreqParam p : {InterFreqParam::DS, InterFreqParam::SF})
        for (ChannelState s : kAllStates)
            reg.interfreq_.emplace(std::pair{p, s}, interfreq_corr_matrix(p, s));
    return reg;
}

const ParamTable &ModelRegistry::table(Band band, ChannelState state) const { return tables_.at({band, state}); }

const CorrelationMatrix &ModelRegistry::cross_corr(Band band, ChannelState state) const
{
    return cross_.at({band, state});
}

const CorrelationMatrix &ModelRegistry::interfreq(InterFreqParam param, ChannelState state) const
{
    return interfreq_.at({param, state});
}

void ModelRegistry::set_table(Band band, ChannelState state, ParamTable table)
{
    const bool arrays = band_has_arrays(band);
    if (table.asa.has_value() != arrays || table.zsa.has_value() != arrays)
        throw DomainError("override for " + std::string(band_label(band)) + " GHz " + std::string(state_label(state)) +
                          ": angular moments must be present exactly for array bands");
    tables_[{band, state}] = std::move(table);
}

} // namespace fr3
