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

#include <algorithm>
#include <cmath>
#include <limits>

#include "predtwin/errors.hpp"
#include "predtwin/fidelity.hpp"

using namespace predtwin;

namespace {

FidelityConfig knobs(int depth, long long rays, int fv = 1, bool dr = false) {
    FidelityConfig c;
    c.max_depth = depth;
    c.n_rays = rays;
    c.n_paths = 10 * rays;
    c.diffuse = dr;
    c.vehicle_fidelity = fv;
    return c;
}

// Three buildings around a crossing, one RSU, a handful of vehicles.
Scene three_building_snapshot(int fv = 1) {
    MapSpec m;
    m.buildings.push_back({{{0, 0}, {40, 0}, {40, 40}, {0, 40}}, 20.0, material::kConcrete});
    m.buildings.push_back({{{60, 0}, {100, 0}, {100, 40}, {60, 40}}, 25.0, material::kConcrete});
    m.buildings.push_back({{{0, 60}, {40, 60}, {40, 100}, {0, 100}}, 18.0, material::kConcrete});
    m.rsus.push_back({50, 50, 10, -11, 45});
    const Scene base = build_scene(m);
    std::map<int, Pose> poses{{1, make_pose({50, 10}, kPi / 2, 8)},  {2, make_pose({20, 50}, 0, 8)},
                              {3, make_pose({80, 52}, kPi, 8)},     {4, make_pose({55, 90}, -kPi / 2, 8)},
                              {5, make_pose({110, 48}, kPi, 8)}};
    std::map<int, VehicleKind> kinds{{1, VehicleKind::Car}, {2, VehicleKind::Bus}, {3, VehicleKind::Car}, {4, VehicleKind::BoxTruck}, {5, VehicleKind::Car}};
    return update_poses(base, poses, fv, kinds);
}

BudgetSpec unlimited() {
    BudgetSpec b;
    b.t_horizon = 1e12;
    return b;
}

}  // namespace

TEST(Budget, HandEvaluated) {
    BudgetSpec b{1000, 100, 10, 50, 20, 50, 1.0};
    EXPECT_DOUBLE_EQ(compute_budget(b), 770.0);
    EXPECT_DOUBLE_EQ(compute_budget({1000, 0, 0, 0, 0, 0, 1.0}), 1000.0);
    BudgetSpec k2 = b;
    k2.kappa = 2.0;
    EXPECT_DOUBLE_EQ(compute_budget(b) - compute_budget(k2), 70.0);
    b.t_horizon = 100;
    EXPECT_THROW(compute_budget(b), Error);
}

TEST(CostModel, KappaRaysAndSurcharge) {
    const SceneStats st = scene_stats(three_building_snapshot());
    EXPECT_EQ(st.sources, 1u);
    EXPECT_EQ(st.receivers, 5u);
    const LatencyModel m;
    const FidelityConfig c = knobs(4, 1000);
    EXPECT_DOUBLE_EQ(estimate_latency(c, st, m, 2.0), 2.0 * estimate_latency(c, st, m, 1.0));
    EXPECT_GT(estimate_latency(knobs(4, 10000), st, m, 1.0), estimate_latency(c, st, m, 1.0));
    FidelityConfig d = c;
    d.diffraction = true;
    EXPECT_NEAR(estimate_latency(d, st, m, 1.0) / estimate_latency(c, st, m, 1.0), m.diffraction_surcharge, 1e-12);
    EXPECT_GT(estimate_latency(knobs(4, 1000, 3), st, m, 1.0), estimate_latency(knobs(4, 1000, 0), st, m, 1.0));
}

TEST(Rmse, HandCases) {
    EXPECT_EQ(rmse_path_gain(std::vector<double>{-80, -90}, std::vector<double>{-80, -90}), 0.0);
    EXPECT_DOUBLE_EQ(rmse_path_gain(std::vector<double>{-77, -87, -97}, std::vector<double>{-80, -90, -100}), 3.0);
    EXPECT_NEAR(rmse_path_gain(std::vector<double>{-80, -86}, std::vector<double>{-80, -90}), std::sqrt(8.0), 1e-12);
    try {
        rmse_path_gain(LinkGains{{{1, 0}}, {-80}}, LinkGains{{{2, 0}}, {-80}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::LinkSetMismatch);
    }
}

TEST(Select, GroundTruthAmongCandidatesScoresZero) {
    const Scene s = three_building_snapshot();
    const FidelityConfig gt = knobs(4, 2000, 1, true);
    const std::vector<FidelityConfig> cands{knobs(2, 1000), gt, knobs(3, 500)};
    const FidelityDecision d = select_fidelity(cands, gt, s, unlimited(), {}, {}, {}, 5);
    EXPECT_EQ(d.chosen, gt);
    EXPECT_EQ(d.chosen_index, 1u);
    EXPECT_EQ(d.rmse_db, 0.0);
    EXPECT_EQ(d.log.size(), 3u);
}

TEST(Select, NothingFits) {
    const Scene s = three_building_snapshot();
    BudgetSpec tight;
    tight.t_horizon = 181.0;  // leaves about a millisecond before the RRM term
    try {
        select_fidelity({knobs(6, 100000), knobs(10, 100000)}, knobs(10, 100000, 1, true), s, tight, {}, {}, {}, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoFeasibleConfig);
    }
    bool found = true;
    const FidelityDecision d = select_fidelity_logged({knobs(6, 100000)}, knobs(10, 100000, 1, true), s, tight, {}, {}, {}, 1, {}, found);
    EXPECT_FALSE(found);
    ASSERT_EQ(d.log.size(), 1u);
    EXPECT_FALSE(d.log[0].feasible);
}

TEST(Select, ArgminAgreesWithDirectComparison) {
    const Scene s = three_building_snapshot();
    const FidelityConfig gt = knobs(3, 50000);
    const std::vector<FidelityConfig> cands{knobs(3, 200), knobs(3, 20000)};
    const FidelityDecision d = select_fidelity(cands, gt, s, unlimited(), {}, {}, {}, 11);
    const LinkGains truth = compute_channels(s, gt, {}, 11).gains();
    std::vector<double> direct;
    for (const auto& c : cands) direct.push_back(rmse_path_gain(compute_channels(s, c, {}, 11).gains(), truth));
    const auto best = static_cast<std::size_t>(std::min_element(direct.begin(), direct.end()) - direct.begin());
    EXPECT_EQ(d.chosen_index, best);
    for (std::size_t i = 0; i < cands.size(); ++i) EXPECT_DOUBLE_EQ(*d.log[i].rmse_db, direct[i]);
    EXPECT_LT(direct[1], direct[0]) << "the denser fan should track the reference better here";
}

TEST(Select, MoreBudgetNeverHurts) {
    const Scene s = three_building_snapshot();
    const FidelityConfig gt = knobs(4, 20000, 1, true);
    std::vector<FidelityConfig> cands;
    for (long long r : {100LL, 1000LL, 10000LL})
        for (int dmax : {1, 2, 4}) cands.push_back(knobs(dmax, r));
    double prev = std::numeric_limits<double>::infinity();
    for (double horizon : {300.0, 400.0, 600.0, 1000.0, 5000.0}) {
        BudgetSpec b;
        b.t_horizon = horizon;
        bool found = false;
        const FidelityDecision d = select_fidelity_logged(cands, gt, s, b, {}, {}, {}, 2, {}, found);
        if (!found) continue;
        EXPECT_LE(d.rmse_db, prev + 1e-12);
        EXPECT_LE(d.est_latency_ms, d.budget_ms);
        prev = d.rmse_db;
    }
    EXPECT_TRUE(std::isfinite(prev));
}

TEST(Select, Deterministic) {
    const Scene s = three_building_snapshot();
    const std::vector<FidelityConfig> cands{knobs(2, 1000), knobs(4, 1000), knobs(4, 3000)};
    const FidelityDecision a = select_fidelity(cands, knobs(6, 5000), s, unlimited(), {}, {}, {}, 3);
    const FidelityDecision b = select_fidelity(cands, knobs(6, 5000), s, unlimited(), {}, {}, {}, 3);
    EXPECT_EQ(a.chosen_index, b.chosen_index);
    EXPECT_EQ(a.rmse_db, b.rmse_db);
    EXPECT_EQ(decision_log_csv({{0.0, a}}), decision_log_csv({{0.0, b}}));
}

TEST(Select, SerialAndParallelChannelsAgree) {
    const Scene s = three_building_snapshot();
    const auto a = compute_channels(s, knobs(4, 5000), {}, 7, true);
    const auto b = compute_channels(s, knobs(4, 5000), {}, 7, false);
    EXPECT_EQ(a.h, b.h);
}

TEST(Defaults, GridAndPresets) {
    const auto c = default_candidates();
    EXPECT_EQ(c.size(), 5u * 4u * 2u * 4u);
    for (const auto& x : c) {
        EXPECT_FALSE(x.diffraction);
        EXPECT_EQ(x.n_paths, 10 * x.n_rays);
    }
    const auto p = default_presets();
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0].name, "low");
    EXPECT_EQ(p[2].cfg.n_rays, kMaxRays);
    EXPECT_TRUE(default_ground_truth().diffraction);
}
