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
#include "predtwin/scene.hpp"

using namespace predtwin;

namespace {

MapSpec one_building() {
    MapSpec m;
    m.buildings.push_back({{{0, 0}, {20, 0}, {20, 20}, {0, 20}}, 15.0, material::kConcrete});
    m.rsus.push_back({50, 50, 10, -11, 45});
    return m;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;  // sentinel: nothing thrown
}

}  // namespace

TEST(Scene, EmptySpecGivesEmptyScene) {
    const Scene s = build_scene(MapSpec{});
    EXPECT_TRUE(s.buildings.empty());
    EXPECT_EQ(s.ground_z, 0.0);
}

TEST(Scene, OneBuildingFootprint) {
    const Scene s = build_scene(one_building());
    ASSERT_EQ(s.buildings.size(), 1u);
    EXPECT_DOUBLE_EQ(s.buildings[0].area(), 400.0);
    EXPECT_DOUBLE_EQ(s.buildings[0].height, 15.0);
    EXPECT_NEAR(s.rsus[0].downtilt, -11.0 * kPi / 180.0, 1e-12);
}

TEST(Scene, ClockwiseFootprintIsReoriented) {
    MapSpec m;
    m.buildings.push_back({{{0, 0}, {0, 20}, {20, 20}, {20, 0}}, 10.0, material::kConcrete});
    EXPECT_DOUBLE_EQ(build_scene(m).buildings[0].area(), 400.0);
}

TEST(Scene, RejectsBadBuildings) {
    MapSpec bow;
    bow.buildings.push_back({{{0, 0}, {10, 10}, {10, 0}, {0, 10}}, 10.0, material::kConcrete});
    EXPECT_EQ(kind_of([&] { build_scene(bow); }), ErrorKind::MalformedMap);
    MapSpec flat = one_building();
    flat.buildings[0].height = 0.0;
    EXPECT_EQ(kind_of([&] { build_scene(flat); }), ErrorKind::MalformedMap);
    MapSpec low_rsu = one_building();
    low_rsu.rsus[0].z = 0.0;
    EXPECT_EQ(kind_of([&] { build_scene(low_rsu); }), ErrorKind::MalformedMap);
}

TEST(Scene, MapJsonRoundTrip) {
    MapSpec m = one_building();
    m.walls.push_back({{0, -5}, {30, -5}, 4.0, material::kMetal});
    m.roads.push_back({{{-10, -10}, {100, -10}}, 14.0});
    const MapSpec back = parse_map(map_to_json(m));
    ASSERT_EQ(back.buildings.size(), 1u);
    EXPECT_EQ(back.buildings[0].polygon, m.buildings[0].polygon);
    ASSERT_EQ(back.walls.size(), 1u);
    EXPECT_DOUBLE_EQ(back.walls[0].reflectivity, material::kMetal);
    EXPECT_DOUBLE_EQ(back.rsus[0].orientation_deg, 45.0);
}

TEST(Scene, ParseMapRejectsGarbage) {
    EXPECT_EQ(kind_of([] { parse_map("{not json"); }), ErrorKind::MalformedMap);
    EXPECT_EQ(kind_of([] { parse_map(R"({"buildings":[{"polygon":[[0,0],[1,0],[1,1]],"height":5,"material":"cheese"}]})"); }),
              ErrorKind::MalformedMap);
}

TEST(Scene, MissingMapFileNamesThePath) {
    try {
        load_map_file("/nonexistent/city.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
        EXPECT_NE(std::string(e.what()).find("/nonexistent/city.json"), std::string::npos);
    }
}

TEST(VehicleGeometry, PrimitiveCountsPerLevel) {
    const int expected[] = {1, 2, 4, 7};
    for (VehicleKind k : kAllVehicleKinds) {
        std::size_t prev = 0;
        for (int f = 0; f < kVehicleFidelityLevels; ++f) {
            const VehicleBody b = vehicle_geometry(k, f);
            EXPECT_EQ(b.primitives.size(), static_cast<std::size_t>(expected[f]));
            EXPECT_GE(b.primitives.size(), prev);
            prev = b.primitives.size();
            EXPECT_EQ(b, vehicle_geometry(k, f));
        }
    }
}

TEST(VehicleGeometry, PrimitivesFitInsideTheBoundingBox) {
    for (VehicleKind k : kAllVehicleKinds) {
        const VehicleDims d = dimensions_of(k);
        for (int f = 0; f < kVehicleFidelityLevels; ++f)
            for (const auto& p : vehicle_geometry(k, f).primitives) {
                EXPECT_LE(std::abs(p.center.x) + p.half.x, d.length / 2 + 1e-9);
                EXPECT_LE(std::abs(p.center.y) + p.half.y, d.width / 2 + 1e-9);
                EXPECT_GE(p.center.z - p.half.z, -1e-9);
                EXPECT_LE(p.center.z + p.half.z, d.height + 1e-9);
            }
    }
    const auto bbox = vehicle_geometry(VehicleKind::Bus, 0).primitives.at(0);
    EXPECT_DOUBLE_EQ(bbox.half.x, 6.0);
    EXPECT_DOUBLE_EQ(bbox.half.z, 1.6);
}

TEST(UpdatePoses, RegistersMovesAndKeepsStaticGeometry) {
    const Scene base = build_scene(one_building());
    const Scene s1 = update_poses(base, {{7, make_pose({50, 10}, 0.0, 5.0)}}, 2, {{7, VehicleKind::Bus}});
    ASSERT_EQ(s1.vehicles.size(), 1u);
    EXPECT_EQ(s1.vehicles.at(7).body.kind, VehicleKind::Bus);
    EXPECT_EQ(s1.vehicles.at(7).body.primitives.size(), 4u);
    EXPECT_EQ(s1.buildings[0].footprint, base.buildings[0].footprint);

    // identical poses give identical geometry; empty map leaves the scene alone
    const Scene s2 = update_poses(s1, {{7, make_pose({50, 10}, 0.0, 5.0)}}, 2);
    EXPECT_EQ(s2.vehicles, s1.vehicles);
    EXPECT_EQ(update_poses(s1, {}, 2).vehicles, s1.vehicles);
    EXPECT_EQ(update_poses(s1, {{7, make_pose({50, 10}, 0.0, 5.0)}}, 3).vehicles.at(7).body.primitives.size(), 7u);
}

TEST(UpdatePoses, UnknownIdWithoutKindThrows) {
    const Scene base = build_scene(one_building());
    EXPECT_EQ(kind_of([&] { update_poses(base, {{3, Pose{}}}, 0); }), ErrorKind::UnknownVehicleKind);
}

TEST(UpdatePoses, HalfTurnReflectsCornersThroughTheCentre) {
    const OrientedBox box = vehicle_geometry(VehicleKind::Car, 0).primitives[0];
    const Pose a = make_pose({10, 20}, 0.3, 0.0), b = make_pose({10, 20}, 0.3 + kPi, 0.0);
    const auto ca = world_corners(box, a), cb = world_corners(box, b);
    for (std::size_t i = 0; i < 4; ++i) {
        const Vec2 reflected = Vec2{20, 40} - ca[i];
        EXPECT_NEAR(cb[i].x, reflected.x, 1e-9);
        EXPECT_NEAR(cb[i].y, reflected.y, 1e-9);
    }
}

TEST(GridCity, BuildsTheRequestedLayout) {
    GridCitySpec g;
    g.extra_buildings = 1;
    g.rsu_nodes = {{1, 1}, {2, 2}};
    const Scene s = build_scene(make_grid_city(g));
    EXPECT_EQ(s.buildings.size(), 10u);
    EXPECT_EQ(s.rsus.size(), 2u);
    EXPECT_EQ(s.wall_face_count(), 40u);
    for (const auto& r : s.rsus) EXPECT_DOUBLE_EQ(r.position.z, 10.0);
}
