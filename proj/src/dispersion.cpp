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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fr3
{

TapSet::TapSet(std::span<const Tap> taps)
{
    delays_.reserve(taps.size());
    powers_.reserve(taps.size());
    const bool with_az = !taps.empty() && taps.front().azimuth_deg.has_value();
    const bool with_zen = !taps.empty() && taps.front().zenith_deg.has_value();
    for (std::size_t i = 0; i < taps.size(); ++i)
    {
        const Tap &t = taps[i];
        if (!(t.power > 0.0) || !std::isfinite(t.power))
            throw DomainError("tap " + std::to_string(i) + ": power must be positive");
        if (!(t.delay_s >= 0.0) || !(t.delay_s <= kMaxExcessDelayS))
            throw DomainError("tap " + std::to_string(i) + ": delay must lie in [0, 8 us]");
        if (t.azimuth_deg.has_value() != with_az || t.zenith_deg.has_value() != with_zen)
            throw DomainError("tap " + std::to_string(i) + ": angle presence differs from the first tap");
        delays_.push_back(t.delay_s);
        powers_.push_back(t.power);
        if (with_az)
            azimuths_.push_back(*t.azimuth_deg);
        if (with_zen)
            zeniths_.push_back(*t.zenith_deg);
    }
}

Tap TapSet::operator[](std::size_t i) const
{
    Tap t{delays_.at(i), powers_.at(i), std::nullopt, std::nullopt};
    if (has_azimuth())
        t.azimuth_deg = azimuths_[i];
    if (has_zenith())
        t.zenith_deg = zeniths_[i];
    return t;
}

double mean_delay(const TapSet &taps)
{
    if (taps.empty())
        throw DomainError("mean delay of an empty tap set");
    return kernels::dot(taps.delays(), taps.powers()) / kernels::sum(taps.powers());
}

double rms_delay_spread(const TapSet &taps)
{
    if (taps.empty())
        throw DomainError("RMS delay spread of an empty tap set");
    const double total = kernels::sum(taps.powers());
    const double tau_m = kernels::dot(taps.delays(), taps.powers()) / total;
    // Two-pass central moment; E[tau^2] - tau_m^2 cancels badly for narrow PDPs at large delay.
    return std::sqrt(kernels::weighted_sq_dev(taps.delays(), taps.powers(), tau_m) / total);
}

int coherence_factor(CoherenceLevel level) { return level == CoherenceLevel::R50 ? 5 : 50; }

double coherence_bandwidth(double tau_rms_s, CoherenceLevel level)
{
    if (!(tau_rms_s > 0.0))
        throw DomainError("coherence bandwidth needs a positive RMS delay spread");
    return 1.0 / (coherence_factor(level) * tau_rms_s);
}

double angular_spread_deg(std::span<const double> angles_deg, std::span<const double> powers)
{
    if (angles_deg.size() != powers.size())
        throw DomainError("angular spread: angle and power lists differ in length");
    if (angles_deg.empty())
        throw DomainError("angular spread of an empty list");

    constexpr double deg = std::numbers::pi / 180.0;
    std::vector<double> c(angles_deg.size());
    std::vector<double> s(angles_deg.size());
    for (std::size_t i = 0; i < angles_deg.size(); ++i)
    {
        if (!(powers[i] > 0.0) || !std::isfinite(powers[i]))
            throw DomainError("angular spread: powers must be positive");
        c[i] = std::cos(angles_deg[i] * deg);
        s[i] = std::sin(angles_deg[i] * deg);
    }
    const double total = kernels::sum(powers);
    const double re = kernels::dot(c, powers) / total;
    const double im = kernels::dot(s, powers) / total;
    if (std::hypot(re, im) < kMinResultant)
        throw UndefinedSpreadError("angular spread undefined: power is (near) isotropic");

    // 1 - |resultant| about the mean direction, summed term by term: stays accurate
    // when the spread is tiny and the resultant is within rounding of 1.
    const double mean_dir = std::atan2(im, re);
    for (std::size_t i = 0; i < angles_deg.size(); ++i)
    {
        const double h = std::sin(0.5 * (angles_deg[i] * deg - mean_dir));
        c[i] = 2.0 * h * h;
    }
    const double deficit = std::clamp(kernels::dot(c, powers) / total, 0.0, 1.0 - kMinResultant);
    return std::sqrt(-2.0 * std::log1p(-deficit)) / deg;
}

double asa_from_taps(const TapSet &taps)
{
    if (!taps.has_azimuth())
        throw DomainError("taps carry no azimuth angles");
    return angular_spread_deg(taps.azimuths_deg(), taps.powers());
}

double zsa_from_taps(const TapSet &taps)
{
    if (!taps.has_zenith())
        throw DomainError("taps carry no zenith angles");
    return angular_spread_deg(taps.zeniths_deg(), taps.powers());
}

} // namespace fr3
