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

#include "predtwin/channel.hpp"

#include <algorithm>

#include "predtwin/errors.hpp"
#include "predtwin/rng.hpp"

namespace predtwin {

void UlaSpec::validate() const {
    if (n_elements < 1) fail(ErrorKind::InvalidArgument, "array needs at least one element");
    if (!(spacing > 0.0)) fail(ErrorKind::InvalidArgument, "element spacing must be positive");
}

std::vector<CirTap> synthesize_cir(const PathList& paths) {
    std::vector<CirTap> taps;
    taps.reserve(paths.size());
    for (const auto& p : paths) taps.push_back({p.delay, std::polar(p.amplitude, p.phase)});
    std::stable_sort(taps.begin(), taps.end(), [](const CirTap& a, const CirTap& b) { return a.delay < b.delay; });
    std::vector<CirTap> merged;
    for (const CirTap& t : taps) {
        if (!merged.empty() && merged.back().delay == t.delay)
            merged.back().gain += t.gain;
        else
            merged.push_back(t);
    }
    return merged;
}

ChannelVector channel_vector(const PathList& paths, const UlaSpec& array, double carrier_hz) {
    array.validate();
    if (!(carrier_hz > 0.0)) fail(ErrorKind::InvalidArgument, "carrier must be positive");
    ChannelVector h(static_cast<std::size_t>(array.n_elements), cdouble(0.0, 0.0));
    for (const auto& p : paths) {
        const cdouble g = std::polar(p.amplitude, p.phase);
        const double psi = 2.0 * kPi * array.spacing * std::sin(p.azimuth - array.orientation) * std::cos(p.elevation);
        for (int i = 0; i < array.n_elements; ++i) h[static_cast<std::size_t>(i)] += g * std::polar(1.0, psi * i);
    }
    return h;
}

double path_gain_db(const ChannelVector& h) {
    if (h.empty()) return kGainFloorDb;
    double e = 0.0;
    for (const auto& v : h) e += std::norm(v);
    if (!(e > 0.0)) return kGainFloorDb;
    return std::max(kGainFloorDb, 10.0 * std::log10(e / static_cast<double>(h.size())));
}

double stochastic_mean_gain_db(double distance, bool los, double carrier_hz, const StochasticModel& m) {
    if (!(distance > 0.0)) fail(ErrorKind::InvalidArgument, "distance must be positive");
    const double lambda = kSpeedOfLight / carrier_hz;
    const double fspl_1m = 20.0 * std::log10(4.0 * kPi / lambda);
    const double n = los ? m.exponent_los : m.exponent_nlos;
    return -(fspl_1m + 10.0 * n * std::log10(distance));
}

ChannelVector stochastic_baseline_channel(double distance, bool los, std::uint64_t seed, int n_elements, double carrier_hz, const StochasticModel& m) {
    if (n_elements < 1) fail(ErrorKind::InvalidArgument, "array needs at least one element");
    Engine eng(derive_seed(seed, 0x73746fULL));
    const double sigma = los ? m.shadow_sigma_los_db : m.shadow_sigma_nlos_db;
    const double gain_db = stochastic_mean_gain_db(distance, los, carrier_hz, m) + sigma * standard_normal(eng);
    const double amp = std::pow(10.0, gain_db / 20.0);
    ChannelVector h(static_cast<std::size_t>(n_elements));
    for (auto& v : h) v = std::polar(amp, 2.0 * kPi * uniform01(eng));
    return h;
}

double umi_los_probability(double d) {
    if (d <= 18.0) return 1.0;
    return 18.0 / d * (1.0 - std::exp(-d / 36.0)) + std::exp(-d / 36.0);
}

}  // namespace predtwin
