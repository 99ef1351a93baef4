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
#include "predtwin/mobility.hpp"

using namespace predtwin;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Network, SegmentAndNodeCounts) {
    const RoadNetwork one = generate_network(1, 1, 100);
    EXPECT_EQ(one.segments.size(), 4u);
    EXPECT_EQ(one.nodes.size(), 4u);
    const RoadNetwork two = generate_network(2, 2, 100);
    EXPECT_EQ(two.segments.size(), 12u);
    EXPECT_EQ(two.nodes.size(), 9u);
    const RoadNetwork again = generate_network(2, 2, 100);
    EXPECT_EQ(two.nodes, again.nodes);
    EXPECT_GT(two.lane_width, dimensions_of(VehicleKind::Bus).width);
}

TEST(Traffic, ZeroVehiclesGivesEmptyTrace) {
    const Trace t = generate_traffic(generate_network(2, 2, 100), 0, {}, 1, 10.0, 0.1);
    EXPECT_TRUE(t.vehicles.empty());
}

TEST(Traffic, DeterministicPerSeed) {
    const RoadNetwork net = generate_network(2, 2, 100);
    const Trace a = generate_traffic(net, 10, {}, 9, 5.0, 0.1);
    EXPECT_EQ(a, generate_traffic(net, 10, {}, 9, 5.0, 0.1));
    EXPECT_NE(a, generate_traffic(net, 10, {}, 10, 5.0, 0.1));
    EXPECT_EQ(trace_to_csv(a), trace_to_csv(generate_traffic(net, 10, {}, 9, 5.0, 0.1)));
}

TEST(Traffic, TwentyFiveVehiclesSixtySecondsPassValidation) {
    const RoadNetwork net = generate_network(2, 2, 100);
    const Trace t = generate_traffic(net, 25, {}, 3, 60.0, 0.1);
    EXPECT_EQ(t.vehicles.size(), 25u);
    EXPECT_NEAR(t.duration(), 60.0, 1e-9);
    EXPECT_NO_THROW(validate_trace(t, kDefaultSpeedLimit));
    const Aabb2 box = net.bounds();
    for (const auto& step : t.steps) {
        ASSERT_EQ(step.size(), 25u);
        for (const auto& p : step) {
            EXPECT_GE(p.position.x, box.lo.x - 5.0);
            EXPECT_LE(p.position.x, box.hi.x + 5.0);
            EXPECT_GE(p.speed, 0.0);
        }
    }
}

TEST(Traffic, OvercrowdingIsReported) {
    EXPECT_EQ(kind_of([] { generate_traffic(generate_network(1, 1, 30), 400, {}, 1, 1.0, 0.1); }), ErrorKind::OvercrowdedNetwork);
}

TEST(Traffic, SomeVehiclesTurn) {
    const Trace t = generate_traffic(generate_network(3, 3, 100), 20, {}, 5, 60.0, 0.1);
    int turned = 0;
    for (std::size_t i = 0; i < t.vehicles.size(); ++i)
        if (std::abs(wrap_angle(t.steps.back()[i].heading - t.steps.front()[i].heading)) > 0.5) ++turned;
    EXPECT_GT(turned, 0);
}

TEST(SamplePoses, NearestStepRule) {
    const Trace t = generate_traffic(generate_network(2, 2, 100), 3, {}, 2, 2.0, 0.1);
    const auto p0 = sample_poses(t, 0.0);
    EXPECT_EQ(p0.at(t.vehicles[0].id), t.steps[0][0]);
    const auto pend = sample_poses(t, t.duration());
    EXPECT_EQ(pend.at(t.vehicles[0].id), t.steps.back()[0]);
    EXPECT_EQ(sample_poses(t, 0.54).at(t.vehicles[1].id), t.steps[5][1]);
    EXPECT_EQ(sample_poses(t, 0.56).at(t.vehicles[1].id), t.steps[6][1]);
    EXPECT_EQ(kind_of([&] { sample_poses(t, 5.0); }), ErrorKind::OutOfRange);
    EXPECT_EQ(kind_of([&] { sample_poses(t, -0.2); }), ErrorKind::OutOfRange);
}

TEST(Ingest, RoundTripThroughCsv) {
    const Trace t = generate_traffic(generate_network(2, 2, 100), 6, {}, 4, 3.0, 0.1);
    const Trace back = parse_trace_csv(trace_to_csv(t));
    EXPECT_NEAR(back.dt, t.dt, 1e-12);
    EXPECT_EQ(back.vehicles, t.vehicles);
    EXPECT_EQ(back.steps, t.steps);
}

TEST(Ingest, RejectsDtGapAndTeleport) {
    const std::string header = "t,vehicle_id,kind,x,y,heading_rad,speed\n";
    const std::string gap = header + "0,1,car,0,0,0,10\n0.1,1,car,1,0,0,10\n0.3,1,car,3,0,0,10\n";
    EXPECT_EQ(kind_of([&] { parse_trace_csv(gap); }), ErrorKind::MalformedTrace);
    const std::string jump = header + "0,1,car,0,0,0,10\n0.1,1,car,100,0,0,10\n";
    EXPECT_EQ(kind_of([&] { parse_trace_csv(jump); }), ErrorKind::MalformedTrace);
    const std::string bad_kind = header + "0,1,tram,0,0,0,10\n";
    EXPECT_EQ(kind_of([&] { parse_trace_csv(bad_kind); }), ErrorKind::MalformedTrace);
    EXPECT_TRUE(parse_trace_csv(header).vehicles.empty());
}
