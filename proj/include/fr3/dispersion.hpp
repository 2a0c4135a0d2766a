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

#ifndef FR3_DISPERSION_HPP
#define FR3_DISPERSION_HPP

#include <optional>
#include <span>
#include <vector>

namespace fr3
{

inline constexpr double kMaxExcessDelayS = 8e-6;    // sounder's maximum measurable excess delay
inline constexpr double kDelayResolutionS = 2.5e-9; // sounder delay bin

// One multipath component.
struct Tap
{
    double delay_s = 0.0;
    double power = 0.0; // linear, unit-free
    std::optional<double> azimuth_deg;
    std::optional<double> zenith_deg;
};

// Multipath components stored column-wise so the moment kernels see contiguous
// delays and powers. Invariants (checked on construction, DomainError otherwise):
// powers > 0, 0 <= delay <= 8 us, angle presence uniform across taps.
class TapSet
{
public:
    TapSet() = default;
    explicit TapSet(std::span<const Tap> taps);

    std::size_t size() const { return delays_.size(); }
    bool empty() const { return delays_.empty(); }

    std::span<const double> delays() const { return delays_; }
    std::span<const double> powers() const { return powers_; }

    // Empty spans when the taps carry no such angle.
    std::span<const double> azimuths_deg() const { return azimuths_; }
    std::span<const double> zeniths_deg() const { return zeniths_; }
    bool has_azimuth() const { return !empty() && azimuths_.size() == size(); }
    bool has_zenith() const { return !empty() && zeniths_.size() == size(); }

    Tap operator[](std::size_t i) const;

private:
    std::vector<double> delays_;
    std::vector<double> powers_;
    std::vector<double> azimuths_;
    std::vector<double> zeniths_;
};

// First power-weighted moment of the delays [s].
double mean_delay(const TapSet &taps);

// Power-weighted second central moment of the delays, square-rooted [s].
double rms_delay_spread(const TapSet &taps);

enum class CoherenceLevel
{
    R50, // frequency correlation >= 0.5, K = 5
    R90  // frequency correlation >= 0.9, K = 50
};

int coherence_factor(CoherenceLevel level);

// B_c = 1 / (K tau_rms) [Hz]. Throws DomainError for tau_rms <= 0.
double coherence_bandwidth(double tau_rms_s, CoherenceLevel level);

// Resultant magnitude below this is treated as isotropic (spread undefined).
inline constexpr double kMinResultant = 1e-12;

// Circular spread sqrt(-2 ln |sum P e^{j phi} / sum P|) in degrees.
// Throws DomainError on mismatched/empty input or non-positive power,
// UndefinedSpreadError when the normalized resultant is below kMinResultant.
double angular_spread_deg(std::span<const double> angles_deg, std::span<const double> powers);

// Azimuth / zenith spread of arrival over the taps. DomainError if the taps lack the angle.
double asa_from_taps(const TapSet &taps);
double zsa_from_taps(const TapSet &taps);

} // namespace fr3

#endif
