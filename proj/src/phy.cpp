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

#include "predtwin/phy.hpp"

#include "predtwin/errors.hpp"

namespace predtwin {

Codebook dft_codebook(int n_tx, int w) {
    if (n_tx < 1 || w < 1) fail(ErrorKind::InvalidArgument, "codebook needs n_tx >= 1 and W >= 1");
    Codebook cb;
    cb.n_tx = n_tx;
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_tx));
    for (int k = 0; k < w; ++k) {
        const double u = -1.0 + 2.0 * k / w;
        ChannelVector f(static_cast<std::size_t>(n_tx));
        for (int i = 0; i < n_tx; ++i) f[static_cast<std::size_t>(i)] = std::polar(norm, kPi * i * u);
        cb.beams.push_back(std::move(f));
    }
    return cb;
}

double beam_gain(const ChannelVector& h, const ChannelVector& f) {
    if (h.size() != f.size()) fail(ErrorKind::DimensionMismatch, "channel has " + std::to_string(h.size()) + " elements, precoder " + std::to_string(f.size()));
    cdouble acc(0.0, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) acc += std::conj(h[i]) * f[i];
    return std::norm(acc);
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

double noise_power_dbm(double bandwidth_hz, double nf_db) {
    if (!(bandwidth_hz > 0.0)) fail(ErrorKind::InvalidArgument, "bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + nf_db;
}

void LinkBudget::validate() const {
    if (!(bandwidth_hz > 0.0)) fail(ErrorKind::ConfigError, "bandwidth_hz must be positive");
}

GainTensor build_gain_tensor(const std::vector<std::vector<ChannelVector>>& channels, const Codebook& cb, bool parallel) {
    const int users = static_cast<int>(channels.size());
    const int rsus = users > 0 ? static_cast<int>(channels.front().size()) : 0;
    for (const auto& row : channels)
        if (static_cast<int>(row.size()) != rsus) fail(ErrorKind::DimensionMismatch, "ragged channel matrix");
    GainTensor g(users, rsus, cb.size());
    const int pairs = users * rsus;
    auto fill = [&](int k) {
        const int u = k / rsus, b = k % rsus;
        const auto& h = channels[static_cast<std::size_t>(u)][static_cast<std::size_t>(b)];
        for (int w = 0; w < cb.size(); ++w) g(u, b, w) = beam_gain(h, cb.beams[static_cast<std::size_t>(w)]);
    };
    if (parallel) {
        // errors inside the loop would escape the region, so check sizes first
        for (const auto& row : channels)
            for (const auto& h : row)
                if (static_cast<int>(h.size()) != cb.n_tx) fail(ErrorKind::DimensionMismatch, "channel length differs from codebook n_tx");
#pragma omp parallel for schedule(static)
        for (int k = 0; k < pairs; ++k) fill(k);
    } else {
        for (int k = 0; k < pairs; ++k) fill(k);
    }
    return g;
}

double sinr(const GainTensor& g, const BeamState& w, int u, int b, const LinkBudget& budget) {
    const double p = budget.p_tx_w();
    double interference = 0.0;
    for (int j = 0; j < g.rsus(); ++j)
        if (j != b) interference += p * g(u, j, w[static_cast<std::size_t>(j)]);
    return p * g(u, b, w[static_cast<std::size_t>(b)]) / (budget.noise_w() + interference);
}

double sinr_direct(const std::vector<ChannelVector>& user_channels, const Codebook& cb, const BeamState& w, int b, const LinkBudget& budget) {
    const double p = budget.p_tx_w();
    double interference = 0.0;
    for (std::size_t j = 0; j < user_channels.size(); ++j)
        if (static_cast<int>(j) != b) interference += p * beam_gain(user_channels[j], cb.beams[static_cast<std::size_t>(w[j])]);
    const double signal = p * beam_gain(user_channels[static_cast<std::size_t>(b)], cb.beams[static_cast<std::size_t>(w[static_cast<std::size_t>(b)])]);
    return signal / (budget.noise_w() + interference);
}

}  // namespace predtwin
