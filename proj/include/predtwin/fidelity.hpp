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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "predtwin/phy.hpp"
#include "predtwin/raytrace.hpp"
#include "predtwin/rrm.hpp"

namespace predtwin {

/// Terms of the ray-tracing time budget, all in ms.
struct BudgetSpec {
    double t_horizon = 1000.0;
    double t_position = 100.0;
    double t_trajpred = 10.0;
    double t_rrm_cloud = 0.0;
    double t_overhead = 20.0;
    double t_guard = 50.0;
    double kappa = 1.0;

    void validate() const;
};

/// T_H - T_P - T_TP - kappa (T_RRM + T_O) - T_G. Throws NegativeBudget if <= 0.
double compute_budget(const BudgetSpec& spec);

/// What the cost model needs to know about a scene.
struct SceneStats {
    std::size_t wall_faces = 0;
    std::array<std::size_t, 3> vehicles_by_kind{};  ///< indexed by VehicleKind
    std::size_t receivers = 0;
    std::size_t sources = 0;

    std::size_t vehicle_primitives(int fidelity) const;
};

SceneStats scene_stats(const Scene& scene);

/// Deterministic cost model in abstract units, mapped to ms by ms_per_unit.
/// Per source: N_rays (c_launch + D (c_bounce + c_isect (faces + prims) +
/// c_capture U)) + c_path min(N_paths, N_rays D) + DR c_diffuse N_rays D
/// (faces + U); times sources, times the diffraction surcharge.
struct LatencyModel {
    double c_launch = 4.0;
    double c_bounce = 6.0;
    double c_isect = 1.0;
    double c_capture = 1.0;
    double c_path = 2.0;
    double c_diffuse = 1.0;
    double diffraction_surcharge = 5.0;
    double ms_per_unit = 7.5e-7;
    double rrm_ms_per_unit = 2e-5;  ///< per (evaluation x user x RSU)

    void validate() const;
};

double estimate_latency(const FidelityConfig& cfg, const SceneStats& stats, const LatencyModel& model, double kappa);
double rrm_latency_ms(long long eval_count, std::size_t users, std::size_t rsus, const LatencyModel& model, double kappa);

/// Per-link path gains in dB with the link identities they belong to.
struct LinkGains {
    std::vector<std::pair<int, int>> links;  ///< (vehicle id, rsu index)
    std::vector<double> gain_db;
};

/// sqrt(mean((test - gt)^2)) over identical link sets. Throws LinkSetMismatch.
double rmse_path_gain(const LinkGains& test, const LinkGains& ground_truth);
double rmse_path_gain(const std::vector<double>& test_db, const std::vector<double>& ground_truth_db);

/// Antenna/RF parameters shared by every RSU.
struct RadioSetup {
    int n_tx = 16;
    double element_spacing = 0.5;
    double carrier_hz = kDefaultCarrierHz;
    int codebook_size = 16;
    LinkBudget link;
};

/// Channels from every RSU to every vehicle of a scene.
struct ChannelSnapshot {
    std::vector<int> vehicle_ids;                    ///< user order
    std::vector<std::vector<ChannelVector>> h;       ///< [user][rsu]
    std::vector<std::vector<PathList>> paths;        ///< [rsu][user]

    LinkGains gains() const;
    std::size_t users() const { return vehicle_ids.size(); }
};

/// Antenna position of a vehicle's receiver: roof centre plus 5 cm.
Vec3 receiver_position(const PlacedVehicle& v);

/// Unfiltered fan per RSU; reusable for any config sharing n_rays, vehicle
/// fidelity and seed.
std::vector<std::vector<PathList>> trace_raw(const Scene& scene, const FidelityConfig& cfg, const RadioSetup& radio, std::uint64_t seed, bool parallel = true);
ChannelSnapshot snapshot_from_raw(const Scene& scene, const std::vector<std::vector<PathList>>& raw, const FidelityConfig& cfg, const RadioSetup& radio);
ChannelSnapshot compute_channels(const Scene& scene, const FidelityConfig& cfg, const RadioSetup& radio, std::uint64_t seed, bool parallel = true);

struct CandidateEval {
    std::size_t index;
    FidelityConfig cfg;
    double est_latency_ms;
    bool feasible;
    std::optional<double> rmse_db;
    bool chosen = false;
};

struct FidelityDecision {
    FidelityConfig chosen;
    std::size_t chosen_index = 0;
    double rmse_db = 0.0;
    double est_latency_ms = 0.0;
    double budget_ms = 0.0;
    double t_rrm_cloud_ms = 0.0;
    std::vector<CandidateEval> log;
};

struct SelectionOptions {
    bool evaluate_infeasible = false;  ///< also score infeasible configs (sweeps)
    bool parallel = true;
};

/// Ground truth traced once; every feasible candidate scored by path-gain RMSE
/// on the same links. Argmin RMSE, ties to lower latency then list order.
/// Throws NoFeasibleConfig when nothing fits the budget (the log is attached
/// to the thrown error's message only; use select_fidelity_logged to keep it).
FidelityDecision select_fidelity(const std::vector<FidelityConfig>& candidates, const FidelityConfig& gt_cfg, const Scene& snapshot, BudgetSpec budget,
                                 const LatencyModel& model, const RadioSetup& radio, const RrmParams& rrm, std::uint64_t seed,
                                 const SelectionOptions& opt = {});

/// Variant for callers that want the decision log even when no candidate is
/// feasible; `feasible_found` reports which case occurred.
FidelityDecision select_fidelity_logged(const std::vector<FidelityConfig>& candidates, const FidelityConfig& gt_cfg, const Scene& snapshot, BudgetSpec budget,
                                        const LatencyModel& model, const RadioSetup& radio, const RrmParams& rrm, std::uint64_t seed,
                                        const SelectionOptions& opt, bool& feasible_found);

/// Cartesian sweep: N_rays in {1e2..1e6} (N_paths = 10 N_rays), D_max in
/// {2, 4, 6, 10}, DR in {false, true}, diffraction off, F_V in {0..3}.
std::vector<FidelityConfig> default_candidates();
FidelityConfig default_ground_truth();

struct FidelityPreset {
    std::string name;
    FidelityConfig cfg;
};
/// low / medium / high fixed-fidelity presets; high's 1e10 rays capped at 1e6.
std::vector<FidelityPreset> default_presets();

std::string decision_log_csv(const std::vector<std::pair<double, FidelityDecision>>& decisions);

}  // namespace predtwin
