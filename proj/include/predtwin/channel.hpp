// SPDX-License-Identifier: Apache-2.0
//
// predtwin: predictive multi-fidelity network twin for vehicular RRM
// Copyright (C) 2026 The predtwin authors
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

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "predtwin/raytrace.hpp"

namespace predtwin {

using cdouble = std::complex<double>;
using ChannelVector = std::vector<cdouble>;

inline constexpr double kDefaultCarrierHz = 5.875e9;
inline constexpr double kGainFloorDb = -200.0;

/// Horizontal uniform linear array at the RSU.
struct UlaSpec {
    int n_elements = 16;
    double spacing = 0.5;      ///< wavelengths
    double orientation = 0.0;  ///< broadside azimuth, rad
    double downtilt = 0.0;     ///< rad; carried for reporting, see README

    void validate() const;
};

struct CirTap {
    double delay;
    cdouble gain;
};

/// Sparse h(tau) = sum a_k exp(j phi_k) delta(tau - tau_k), sorted by delay;
/// taps with exactly equal delay are merged.
std::vector<CirTap> synthesize_cir(const PathList& paths);

/// Per-element response: sum over paths of a_k exp(j phi_k) times the ULA
/// steering phase for the path's departure direction.
ChannelVector channel_vector(const PathList& paths, const UlaSpec& array, double carrier_hz = kDefaultCarrierHz);

/// 10 log10(|h|^2 / N_tx), floored at -200 dB.
double path_gain_db(const ChannelVector& h);

struct StochasticModel {
    double exponent_los = 2.1;
    double exponent_nlos = 3.2;
    double shadow_sigma_los_db = 4.0;
    double shadow_sigma_nlos_db = 8.0;
};

/// Mean path gain in dB of the log-distance stand-in (free space up to 1 m).
double stochastic_mean_gain_db(double distance, bool los, double carrier_hz = kDefaultCarrierHz, const StochasticModel& m = {});

/// Log-distance + log-normal shadowing gain with independent random phase on
/// every element. No geometry involved.
ChannelVector stochastic_baseline_channel(double distance, bool los, std::uint64_t seed, int n_elements = 16, double carrier_hz = kDefaultCarrierHz,
                                          const StochasticModel& m = {});

/// Urban-microcell style LOS probability used to draw the LOS flag for the
/// stochastic baseline: min(18/d, 1)(1 - exp(-d/36)) + exp(-d/36).
double umi_los_probability(double distance_2d);

}  // namespace predtwin
