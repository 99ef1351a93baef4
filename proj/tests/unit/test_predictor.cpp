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

#include <gtest/gtest.h>

#include "predtwin/errors.hpp"
#include "predtwin/predictor.hpp"
#include "predtwin/rng.hpp"

using namespace predtwin;

namespace {

HistoryWindow straight(Vec2 start, Vec2 v, int k, double dt = 0.1) {
    HistoryWindow h;
    h.dt = dt;
    for (int i = 0; i < k; ++i) h.states.push_back(make_pose(start + v * (i * dt), angle_of(v), norm(v)));
    return h;
}

}  // namespace

TEST(Ego, StationaryWindowMapsToOrigin) {
    HistoryWindow h;
    for (int i = 0; i < 5; ++i) h.states.push_back(make_pose({3, 4}, 0.7, 0.0));
    for (const auto& r : ego_transform(h).rows) {
        EXPECT_NEAR(r[0], 0.0, 1e-12);
        EXPECT_NEAR(r[1], 0.0, 1e-12);
    }
}

TEST(Ego, NorthFacingPreviousPointSouth) {
    HistoryWindow h;
    h.states = {make_pose({5, 9}, kPi / 2, 10.0), make_pose({5, 10}, kPi / 2, 10.0)};
    const EgoFeatures f = ego_transform(h);
    EXPECT_NEAR(f.rows[0][0], -1.0, 1e-12);
    EXPECT_NEAR(f.rows[0][1], 0.0, 1e-12);
    // current velocity lies on the ego x axis
    EXPECT_NEAR(f.rows[1][2], 10.0, 1e-12);
    EXPECT_NEAR(f.rows[1][3], 0.0, 1e-12);
    EXPECT_NEAR(f.rows[1][4], kPi / 2, 1e-12);
}

TEST(Ego, InverseRecoversGlobalPositions) {
    Engine e(3);
    HistoryWindow h;
    for (int i = 0; i < 30; ++i) h.states.push_back(make_pose({uniform01(e) * 500 - 250, uniform01(e) * 500}, uniform01(e) * 6 - 3, 5));
    const auto back = inverse_ego_positions(ego_transform(h));
    for (std::size_t i = 0; i < back.size(); ++i) EXPECT_LT(norm(back[i] - h.states[i].position), 1e-9);
}

TEST(Cv, StationaryAndStraight) {
    EXPECT_LT(norm(cv_predict(straight({1, 2}, {0, 0}, 10), 1.0).position - Vec2{1, 2}), 1e-12);
    const HistoryWindow h = straight({0, 0}, {10, 0}, 10);
    const PredictedPose p = cv_predict(h, 1.0);
    EXPECT_NEAR(p.position.x, h.current().position.x + 10.0, 1e-9);
    EXPECT_NEAR(p.position.y, 0.0, 1e-9);
}

TEST(Cv, ArcIsNotPredictedExactly) {
    HistoryWindow h;
    const double r = 20.0, w = 0.5;  // rad/s
    for (int i = 0; i < 30; ++i) {
        const double a = w * i * 0.1;
        h.states.push_back(make_pose({r * std::cos(a), r * std::sin(a)}, a + kPi / 2, r * w));
    }
    const double a_end = w * (2.9 + 1.0);
    const Pose truth = make_pose({r * std::cos(a_end), r * std::sin(a_end)}, 0, 0);
    EXPECT_GT(fde({cv_predict(h, 1.0)}, {truth}), 0.5);
}

TEST(Kf, NoiselessConstantVelocity) {
    const HistoryWindow h = straight({0, 0}, {8, -3}, 30);
    const PredictedPose p = kf_predict(h, 1.0);
    const Vec2 truth = h.current().position + Vec2{8, -3};
    EXPECT_LT(norm(p.position - truth), 0.1);
    EXPECT_LT(norm(p.position - cv_predict(h, 1.0).position), 0.05);
    EXPECT_NEAR(p.heading, angle_of({8, -3}), 1e-3);
}

TEST(Kf, StationaryFixedPoint) {
    const HistoryWindow h = straight({4, 4}, {0, 0}, 30);
    EXPECT_LT(norm(kf_predict(h, 1.0).position - Vec2{4, 4}), 0.01);
}

TEST(Kf, NoisyStraightTrackNoWorseThanCv) {
    double kf_sum = 0.0, cv_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const HistoryWindow clean = straight({0, 0}, {12, 0}, 30);
        HistoryWindow noisy = clean;
        for (std::size_t i = 0; i < noisy.states.size(); ++i)
            noisy.states[i] = observe_pose(clean.states[i], 0.02, seed, 1, static_cast<long long>(i));
        const Vec2 truth = clean.current().position + Vec2{12, 0};
        kf_sum += norm(kf_predict(noisy, 1.0).position - truth);
        cv_sum += norm(cv_predict(noisy, 1.0).position - truth);
    }
    EXPECT_LE(kf_sum / 100, cv_sum / 100 + 0.05);
}

TEST(Kf, BadParametersAreNumericalFailures) {
    KalmanParams p;
    p.r = -1.0;
    try {
        kf_predict(straight({0, 0}, {1, 0}, 10), 1.0, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NumericalFailure);
    }
}

TEST(Fde, HandCases) {
    EXPECT_EQ(fde({{{3, 4}, 0, 1}}, {make_pose({0, 0}, 0, 0)}), 5.0);
    EXPECT_EQ(fde({{{0, 0}, 0, 1}, {{10, 0}, 0, 1}}, {make_pose({0, 0}, 0, 0), make_pose({0, 0}, 0, 0)}), 5.0);
    EXPECT_EQ(fde({{{1, 1}, 0, 1}}, {make_pose({1, 1}, 0, 0)}), 0.0);
    EXPECT_THROW(fde({{{1, 1}, 0, 1}}, {}), Error);
}

TEST(Predictor, FactoryAndDeterminism) {
    const auto kf = make_predictor({});
    EXPECT_EQ(kf->name(), "kf");
    PredictorConfig c;
    c.kind = "cv";
    EXPECT_EQ(make_predictor(c)->name(), "cv");
    c.kind = "transformer";
    EXPECT_THROW(make_predictor(c), Error);
    const HistoryWindow h = straight({0, 0}, {5, 5}, 30);
    EXPECT_EQ(kf->predict(h, 1.0).position, kf->predict(h, 1.0).position);
}

TEST(Observe, NoiseIsSmallAndDeterministic) {
    const Pose truth = make_pose({100, 50}, 1.0, 10);
    const Pose a = observe_pose(truth, 0.02, 7, 3, 11), b = observe_pose(truth, 0.02, 7, 3, 11);
    EXPECT_EQ(a, b);
    EXPECT_LT(norm(a.position - truth.position), 0.2);
    EXPECT_EQ(observe_pose(truth, 0.0, 7, 3, 11).position, truth.position);
}
