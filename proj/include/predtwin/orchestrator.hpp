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

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "predtwin/fidelity.hpp"
#include "predtwin/mobility.hpp"
#include "predtwin/predictor.hpp"
#include "predtwin/scene.hpp"

namespace predtwin {

enum class Mode { Predictive, Reactive, Oracle, StochasticBaseline };
const char* to_string(Mode m);
Mode mode_from_string(std::string_view s);  ///< throws ConfigError

enum class OverrunPolicy { Linear, HardDrop };

/// Grid of candidate knobs; the cartesian product becomes the candidate list.
struct CandidateGrid {
    std::vector<long long> n_rays{100, 1000, 10000, 100000, 1000000};
    std::vector<int> max_depth{2, 4, 6, 10};
    std::vector<bool> diffuse{false, true};
    std::vector<int> vehicle_fidelity{0, 1, 2, 3};
    long long paths_per_ray = 10;
    bool include_presets = true;  ///< append the fixed presets to the grid

    std::vector<FidelityConfig> expand(const std::vector<FidelityPreset>& presets) const;
};

struct ScenarioSpec {
    std::string map_path;   ///< empty: generated grid city
    GridCitySpec grid;      ///< also sizes the road network for generated traffic
    std::string trace_path; ///< empty: generated traffic
    int vehicles = 25;
    KindMix mix;
    double trace_dt = 0.1;
    double speed_limit = kDefaultSpeedLimit;
    std::uint64_t traffic_seed = 1;
};

struct EpisodeConfig {
    Mode mode = Mode::Predictive;
    std::optional<FidelityConfig> fixed_fidelity;  ///< disables Phase 1
    std::string fixed_label;                       ///< preset name when set from one
    double tti_s = 1.0;
    double horizon_s = 1.0;
    double t_update_s = 10.0;
    double staleness_s = 1.0;
    double t_start_s = 3.0;
    int n_tti = 60;
    double position_sigma = 0.02;
    OverrunPolicy overrun = OverrunPolicy::Linear;
    std::uint64_t seed = 1;

    ScenarioSpec scenario;
    FidelityConfig ground_truth = default_ground_truth();
    CandidateGrid candidates;
    std::vector<FidelityPreset> presets = default_presets();
    BudgetSpec budget;
    LatencyModel latency;
    RadioSetup radio;
    RrmParams rrm;
    PredictorConfig predictor;

    void validate() const;  ///< throws ConfigError
    /// Config the mode plans with when no decision has been published.
    FidelityConfig reactive_fidelity() const;
};

/// Parses an episode config document. Unknown keys are ConfigError.
EpisodeConfig parse_episode_config(const nlohmann::json& doc);
EpisodeConfig load_episode_config(const std::string& path, const std::vector<std::string>& overrides = {});
/// Applies `dotted.key=value` overrides; value parsed as JSON, else kept as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);
nlohmann::json episode_config_to_json(const EpisodeConfig& cfg);
/// "predictive", "reactive", ..., or "predictive@<preset>" for a fixed preset.
EpisodeConfig with_mode(const EpisodeConfig& base, const std::string& mode_spec);

/// Map and trace resolved from a ScenarioSpec.
struct Scenario {
    Scene base;  ///< static geometry, no vehicles
    Trace trace;
    std::vector<std::string> input_files;
};
Scenario load_scenario(const ScenarioSpec& spec, double required_duration);

/// Published Phase-1 result consumed by Phase 2.
struct PublishedDecision {
    double t = 0.0;
    FidelityDecision decision;
    bool fallback = false;  ///< nothing fit the budget; cheapest candidate used
};

/// Latest-decision mailbox between the calibration and edge loops.
class DecisionBoard {
public:
    void publish(PublishedDecision d);
    std::shared_ptr<const PublishedDecision> latest() const;

private:
    mutable std::mutex mu_;
    std::shared_ptr<const PublishedDecision> latest_;
};

struct StageLatency {
    double position_ms = 0.0;
    double predict_ms = 0.0;
    double scene_ms = 0.0;
    double trace_ms = 0.0;
    double rrm_ms = 0.0;
    double total() const { return position_ms + predict_ms + scene_ms + trace_ms + rrm_ms; }
};

struct TtiRecord {
    double t = 0.0;       ///< decision time
    double target_t = 0.0;  ///< slot the decision is applied to
    std::string config;   ///< FidelityConfig label, or "stochastic"
    StageLatency latency;
    bool deadline_met = true;
    bool budget_violation = false;
    double effective_tx_fraction = 1.0;
    BeamState beams;
    int users = 0;
    int served = 0;
    double sum_rate = 0.0;
    double outage_prob = 0.0;
    double rmse_db = 0.0;
    double fde_m = 0.0;
    double latest_observation_s = 0.0;  ///< newest true pose time read for planning
};

struct EpisodeAggregates {
    double mean_sum_rate = 0.0;
    double mean_outage = 0.0;
    double mean_rmse_db = 0.0;
    double mean_fde_m = 0.0;
    double deadline_violation_rate = 0.0;
};
EpisodeAggregates aggregate(const std::vector<TtiRecord>& records);

struct EpisodeMetrics {
    std::vector<TtiRecord> records;
    EpisodeAggregates aggregates;
    std::vector<PublishedDecision> decisions;
};

/// Ground-truth channels at true poses, shared across modes of one scenario.
struct TruthSnapshot {
    ChannelSnapshot channels;
    GainTensor gains;
};
class TruthCache {
public:
    std::shared_ptr<const TruthSnapshot> get(long long step, const std::string& key) const;
    void put(long long step, const std::string& key, std::shared_ptr<const TruthSnapshot> s);

private:
    mutable std::mutex mu_;
    std::map<std::pair<long long, std::string>, std::shared_ptr<const TruthSnapshot>> map_;
};

/// Phase 1: fidelity selection on the observed snapshot, with the cheapest
/// candidate (by estimated latency) published and flagged when nothing fits.
PublishedDecision phase1_calibrate(const Scene& context, const std::vector<FidelityConfig>& candidates, const EpisodeConfig& cfg, double t,
                                   std::uint64_t seed);

/// Realized (sum_rate, outage) of a plan on truth gains, scaled by the
/// effective transmit fraction.
NetworkMetrics score_realized(const Assignment& plan, const BeamState& beams, const GainTensor& truth, const LinkBudget& link, double tx_fraction);

double effective_tx_fraction(double total_ms, double tti_ms, OverrunPolicy policy);

EpisodeMetrics run_episode(const EpisodeConfig& cfg, const Scenario& scenario, TruthCache* cache = nullptr);
EpisodeMetrics run_episode(const EpisodeConfig& cfg);

struct ModeRun {
    std::string mode;
    std::uint64_t seed;
    EpisodeAggregates aggregates;
};
struct ComparisonReport {
    std::vector<std::string> modes;
    std::vector<std::uint64_t> seeds;
    std::vector<ModeRun> runs;  ///< seed-major, mode-minor
    std::string to_csv() const; ///< adds deltas against the first mode
};
/// Every mode on every seed; modes of one seed share scenario and truth.
ComparisonReport compare_modes(const EpisodeConfig& base, const std::vector<std::string>& modes, const std::vector<std::uint64_t>& seeds);

std::string records_to_csv(const std::vector<TtiRecord>& records);
nlohmann::json aggregates_to_json(const EpisodeMetrics& m);

}  // namespace predtwin
