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

#include "predtwin/predictor.hpp"

#include <Eigen/Dense>

#include "predtwin/errors.hpp"
#include "predtwin/rng.hpp"

namespace predtwin {

void HistoryWindow::validate() const {
    if (states.size() < 2) fail(ErrorKind::InvalidArgument, "history window needs K >= 2 states");
    if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "history dt must be positive");
}

EgoFeatures ego_transform(const HistoryWindow& history) {
    history.validate();
    const Pose& cur = history.current();
    EgoFeatures out;
    out.anchor_position = cur.position;
    out.anchor_heading = cur.heading;
    // R(theta)^T is a rotation by -theta
    for (const Pose& s : history.states) {
        const Vec2 p = rotate(s.position - cur.position, -cur.heading);
        const Vec2 v = rotate(s.velocity(), -cur.heading);
        out.rows.push_back({p.x, p.y, v.x, v.y, s.heading});
    }
    return out;
}

std::vector<Vec2> inverse_ego_positions(const EgoFeatures& f) {
    std::vector<Vec2> out;
    out.reserve(f.rows.size());
    for (const auto& r : f.rows) out.push_back(f.anchor_position + rotate(Vec2{r[0], r[1]}, f.anchor_heading));
    return out;
}

PredictedPose cv_predict(const HistoryWindow& history, double horizon) {
    history.validate();
    const auto& s = history.states;
    const Vec2 v = (s.back().position - s[s.size() - 2].position) * (1.0 / history.dt);
    return {s.back().position + v * horizon, s.back().heading, horizon};
}

PredictedPose kf_predict(const HistoryWindow& history, double horizon, const KalmanParams& kp) {
    history.validate();
    using Mat4 = Eigen::Matrix4d;
    using Vec4 = Eigen::Vector4d;
    const double dt = history.dt;

    Mat4 F = Mat4::Identity();
    F(0, 2) = dt;
    F(1, 3) = dt;
    // discrete white-noise acceleration, per axis [[dt^4/4, dt^3/2], [dt^3/2, dt^2]]
    Mat4 Q = Mat4::Zero();
    const double a = dt * dt * dt * dt / 4.0, b = dt * dt * dt / 2.0, c = dt * dt;
    Q(0, 0) = Q(1, 1) = a;
    Q(0, 2) = Q(2, 0) = Q(1, 3) = Q(3, 1) = b;
    Q(2, 2) = Q(3, 3) = c;
    Q *= kp.q_var;
    Eigen::Matrix<double, 2, 4> Hm = Eigen::Matrix<double, 2, 4>::Zero();
    Hm(0, 0) = Hm(1, 1) = 1.0;
    const Eigen::Matrix2d R = Eigen::Matrix2d::Identity() * kp.r;

    const Pose& first = history.states.front();
    Vec4 x(first.position.x, first.position.y, 0.0, 0.0);
    Mat4 P = Mat4::Zero();
    P(0, 0) = P(1, 1) = kp.p0_p;
    P(2, 2) = P(3, 3) = kp.p0_v;

    auto check_pd = [](const auto& M, const char* what) {
        if (!M.allFinite()) fail(ErrorKind::NumericalFailure, std::string(what) + " is not finite");
        Eigen::LLT<std::decay_t<decltype(M)>> llt(M);
        if (llt.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, std::string(what) + " lost positive-definiteness");
    };
    check_pd(P, "initial covariance");

    for (std::size_t k = 1; k < history.states.size(); ++k) {
        x = F * x;
        P = F * P * F.transpose() + Q;
        const Eigen::Vector2d z(history.states[k].position.x, history.states[k].position.y);
        const Eigen::Matrix2d S = Hm * P * Hm.transpose() + R;
        check_pd(S, "innovation covariance");
        const Eigen::Matrix<double, 4, 2> K = P * Hm.transpose() * S.inverse();
        x += K * (z - Hm * x);
        // Joseph form keeps P symmetric under round-off
        const Mat4 I_KH = Mat4::Identity() - K * Hm;
        P = I_KH * P * I_KH.transpose() + K * R * K.transpose();
        P = 0.5 * (P + P.transpose());
        check_pd(P, "state covariance");
    }

    PredictedPose out;
    out.position = {x(0) + x(2) * horizon, x(1) + x(3) * horizon};
    out.horizon = horizon;
    const double speed = std::hypot(x(2), x(3));
    out.heading = speed > 0.5 ? std::atan2(x(3), x(2)) : history.current().heading;
    return out;
}

double fde(const std::vector<PredictedPose>& predictions, const std::vector<Pose>& truths) {
    if (predictions.size() != truths.size())
        fail(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " + std::to_string(truths.size()) + " truths");
    if (predictions.empty()) fail(ErrorKind::LengthMismatch, "FDE needs at least one prediction");
    double sum = 0.0;
    for (std::size_t i = 0; i < truths.size(); ++i) sum += norm(predictions[i].position - truths[i].position);
    return sum / static_cast<double>(truths.size());
}

namespace {

class CvPredictor final : public Predictor {
public:
    PredictedPose predict(const HistoryWindow& h, double horizon) const override { return cv_predict(h, horizon); }
    std::string name() const override { return "cv"; }
};

class KfPredictor final : public Predictor {
public:
    explicit KfPredictor(KalmanParams p) : params_(p) {}
    PredictedPose predict(const HistoryWindow& h, double horizon) const override { return kf_predict(h, horizon, params_); }
    std::string name() const override { return "kf"; }

private:
    KalmanParams params_;
};

}  // namespace

std::unique_ptr<Predictor> make_predictor(const PredictorConfig& cfg) {
    if (cfg.history_length < 2) fail(ErrorKind::ConfigError, "predictor history length must be >= 2");
    if (cfg.kind == "cv") return std::make_unique<CvPredictor>();
    if (cfg.kind == "kf") return std::make_unique<KfPredictor>(cfg.kf);
    fail(ErrorKind::ConfigError, "unknown predictor '" + cfg.kind + "' (expected cv or kf)");
}

Pose observe_pose(const Pose& truth, double sigma, std::uint64_t seed, int vehicle_id, long long step) {
    if (sigma <= 0.0) return truth;
    Engine eng(derive_seed(seed, 0x72746bULL, static_cast<std::uint64_t>(vehicle_id), static_cast<std::uint64_t>(step)));
    Pose p = truth;
    p.position.x += sigma * standard_normal(eng);
    p.position.y += sigma * standard_normal(eng);
    return p;
}

}  // namespace predtwin
