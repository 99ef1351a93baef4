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
#include <memory>
#include <string>
#include <vector>

#include "predtwin/scene.hpp"

namespace predtwin {

/// K observed states, oldest first, uniformly spaced by dt. The last entry
/// is the current state.
struct HistoryWindow {
    double dt = 0.1;
    std::vector<Pose> states;

    void validate() const;  ///< throws InvalidArgument unless K >= 2 and dt > 0
    const Pose& current() const { return states.back(); }
};

inline constexpr int kDefaultHistoryLength = 30;

/// Per-step [p'x, p'y, v'x, v'y, theta] in the frame of the current pose,
/// plus the anchor needed to undo the transform.
struct EgoFeatures {
    std::vector<std::array<double, 5>> rows;
    Vec2 anchor_position;
    double anchor_heading = 0.0;
};

EgoFeatures ego_transform(const HistoryWindow& history);

/// Global positions recovered from ego-frame features.
std::vector<Vec2> inverse_ego_positions(const EgoFeatures& features);

struct PredictedPose {
    Vec2 position;
    double heading = 0.0;
    double horizon = 0.0;
};

PredictedPose cv_predict(const HistoryWindow& history, double horizon);

struct KalmanParams {
    double q_var = 10.0;   ///< white-noise acceleration variance
    double r = 0.001;      ///< position measurement variance, m^2
    double p0_v = 1000.0;  ///< initial velocity variance
    double p0_p = 0.001;   ///< initial position variance
};

/// Constant-velocity Kalman filter over the window, extrapolated by `horizon`.
PredictedPose kf_predict(const HistoryWindow& history, double horizon, const KalmanParams& params = {});

/// Mean Euclidean distance between predicted and true final positions.
double fde(const std::vector<PredictedPose>& predictions, const std::vector<Pose>& truths);

/// Single slot for any trajectory model: (history, H) -> pose at t + H.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual PredictedPose predict(const HistoryWindow& history, double horizon) const = 0;
    virtual std::string name() const = 0;
};

struct PredictorConfig {
    std::string kind = "kf";  ///< "cv" or "kf"
    KalmanParams kf;
    int history_length = kDefaultHistoryLength;
};

std::unique_ptr<Predictor> make_predictor(const PredictorConfig& cfg);

/// RTK-style observation: true pose with zero-mean Gaussian position noise,
/// reproducible per (seed, vehicle, step).
Pose observe_pose(const Pose& truth, double sigma, std::uint64_t seed, int vehicle_id, long long step);

}  // namespace predtwin
