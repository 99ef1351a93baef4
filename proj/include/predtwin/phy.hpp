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

#include <vector>

#include "predtwin/channel.hpp"

namespace predtwin {

/// W unit-norm precoders of length N_tx.
struct Codebook {
    int n_tx = 0;
    std::vector<ChannelVector> beams;

    int size() const { return static_cast<int>(beams.size()); }
};

/// DFT beams steered to u_w = -1 + 2w/W in sine space (half-wavelength ULA).
Codebook dft_codebook(int n_tx, int w);

/// |h^H f|^2. Throws DimensionMismatch.
double beam_gain(const ChannelVector& h, const ChannelVector& f);

double dbm_to_watt(double dbm);
double watt_to_dbm(double w);
double db_to_linear(double db);
double linear_to_db(double x);

/// Thermal noise -174 dBm/Hz + 10 log10(BW) + NF, in dBm.
double noise_power_dbm(double bandwidth_hz, double nf_db);

struct LinkBudget {
    double p_tx_dbm = 44.0;
    double bandwidth_hz = 20e6;
    double noise_figure_db = 6.0;
    double gamma_min_db = -6.0;

    void validate() const;
    double p_tx_w() const { return dbm_to_watt(p_tx_dbm); }
    double noise_w() const { return dbm_to_watt(noise_power_dbm(bandwidth_hz, noise_figure_db)); }
    double gamma_min() const { return db_to_linear(gamma_min_db); }
};

/// G[u][b][w] = |h_{u,b}^H f_w|^2, stored flat with w fastest.
class GainTensor {
public:
    GainTensor() = default;
    GainTensor(int users, int rsus, int beams) : u_(users), b_(rsus), w_(beams), data_(static_cast<std::size_t>(users) * rsus * beams, 0.0) {}

    int users() const { return u_; }
    int rsus() const { return b_; }
    int beams() const { return w_; }
    double operator()(int u, int b, int w) const { return data_[index(u, b, w)]; }
    double& operator()(int u, int b, int w) { return data_[index(u, b, w)]; }
    const std::vector<double>& data() const { return data_; }
    bool operator==(const GainTensor&) const = default;

private:
    std::size_t index(int u, int b, int w) const { return (static_cast<std::size_t>(u) * b_ + b) * w_ + w; }
    int u_ = 0, b_ = 0, w_ = 0;
    std::vector<double> data_;
};

/// channels[u][b] is the vector from RSU b to user u.
GainTensor build_gain_tensor(const std::vector<std::vector<ChannelVector>>& channels, const Codebook& cb, bool parallel = true);

using BeamState = std::vector<int>;

/// Exact SINR (linear) of user u served by RSU b under the full beam state.
double sinr(const GainTensor& g, const BeamState& w, int u, int b, const LinkBudget& budget);

/// Same quantity straight from channel vectors and precoders.
double sinr_direct(const std::vector<ChannelVector>& user_channels, const Codebook& cb, const BeamState& w, int b, const LinkBudget& budget);

}  // namespace predtwin
