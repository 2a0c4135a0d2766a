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

#ifndef FR3_PROPAGATION_HPP
#define FR3_PROPAGATION_HPP

#include "fr3/model_params.hpp"

namespace fr3
{

inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s
inline constexpr double kReferenceDistanceM = 1.0;

// Free-space path loss 20 log10(4 pi d f / c). Throws DomainError unless f > 0 and d > 0.
double fspl_db(double frequency_hz, double distance_m);

// Close-in path loss: PL(d) = pl0 + 10 ple log10(d / d0) + S, with d0 fixed at 1 m.
class PathLossModel
{
public:
    PathLossModel(double pl0_db, double ple);

    static PathLossModel from_table(const ParamTable &table) { return {table.pl0_db, table.ple}; }

    double pl0_db() const { return pl0_db_; }
    double ple() const { return ple_; }
    double d0_m() const { return kReferenceDistanceM; }

private:
    double pl0_db_;
    double ple_;
};

// Throws DomainError for distance < d0.
double path_loss_db(const PathLossModel &model, double distance_m, double shadow_db = 0.0);

// Which branch of the two-slope NLOS composite is active at a distance.
struct TwoSlopeResult
{
    double pl_db;
    ChannelState branch; // LOS when the LOS curve is the larger one
};

// max(PL_LOS(d), PL_NLOS(d)) without shadowing; ties resolve to the NLOS branch.
TwoSlopeResult two_slope_nlos(const PathLossModel &los, const PathLossModel &nlos, double distance_m);

double effective_nlos_pl_db(const PathLossModel &los, const PathLossModel &nlos, double distance_m);

inline constexpr double kDefaultSigmaMinDb = 0.5;

// Shadow-fading standard deviation, either constant or growing with log distance.
class ShadowModel
{
public:
    enum class Kind
    {
        Constant,
        DistanceScaled
    };

    static ShadowModel constant(double sigma_db);

    // sigma(d) = coeff * log10(d), floored at sigma_min.
    static ShadowModel distance_scaled(double coeff_db_per_decade, double sigma_min_db = kDefaultSigmaMinDb);

    Kind kind() const { return kind_; }
    double parameter() const { return value_; } // sigma or coefficient
    double sigma_min_db() const { return sigma_min_; }

private:
    ShadowModel(Kind kind, double value, double sigma_min) : kind_(kind), value_(value), sigma_min_(sigma_min) {}

    Kind kind_;
    double value_;
    double sigma_min_;
};

// Throws DomainError for distance < 1 m.
double shadow_sigma_db(const ShadowModel &shadow, double distance_m);

} // namespace fr3

#endif
