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

#include "fr3/propagation.hpp"

#include "fr3/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fr3
{

double fspl_db(double frequency_hz, double distance_m)
{
    if (!(frequency_hz > 0.0) || !(distance_m > 0.0))
        throw DomainError("fspl_db requires positive frequency and distance");
    return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * frequency_hz / kSpeedOfLight);
}

PathLossModel::PathLossModel(double pl0_db, double ple) : pl0_db_(pl0_db), ple_(ple)
{
    if (!std::isfinite(pl0_db))
        throw DomainError("path loss intercept must be finite");
    if (!(ple > 0.0) || !std::isfinite(ple))
        throw DomainError("path loss exponent must be positive");
}

double path_loss_db(const PathLossModel &model, double distance_m, double shadow_db)
{
    if (!(distance_m >= model.d0_m()))
        throw DomainError("path loss model is undefined inside the 1 m reference distance (d = " +
                          std::to_string(distance_m) + " m)");
    return model.pl0_db() + 10.0 * model.ple() * std::log10(distance_m / model.d0_m()) + shadow_db;
}

TwoSlopeResult two_slope_nlos(const PathLossModel &los, const PathLossModel &nlos, double distance_m)
{
    const double pl_los = path_loss_db(los, distance_m);
    const double pl_nlos = path_loss_db(nlos, distance_m);
    if (pl_los > pl_nlos)
        return {pl_los, ChannelState::LOS};
    return {pl_nlos, ChannelState::NLOS};
}

double effective_nlos_pl_db(const PathLossModel &los, const PathLossModel &nlos, double distance_m)
{
    return two_slope_nlos(los, nlos, distance_m).pl_db;
}

ShadowModel ShadowModel::constant(double sigma_db)
{
    if (!(sigma_db > 0.0) || !std::isfinite(sigma_db))
        throw DomainError("shadow sigma must be positive");
    return {Kind::Constant, sigma_db, 0.0};
}

ShadowModel ShadowModel::distance_scaled(double coeff_db_per_decade, double sigma_min_db)
{
    if (!(coeff_db_per_decade > 0.0) || !std::isfinite(coeff_db_per_decade))
        throw DomainError("distance-scaled shadow coefficient must be positive");
    if (!(sigma_min_db > 0.0) || !std::isfinite(sigma_min_db))
        throw DomainError("shadow sigma floor must be positive");
    return {Kind::DistanceScaled, coeff_db_per_decade, sigma_min_db};
}

double shadow_sigma_db(const ShadowModel &shadow, double distance_m)
{
    if (!(distance_m >= 1.0))
        throw DomainError("shadow sigma is undefined below 1 m");
    if (shadow.kind() == ShadowModel::Kind::Constant)
        return shadow.parameter();
    return std::max(shadow.parameter() * std::log10(distance_m), shadow.sigma_min_db());
}

} // namespace fr3
