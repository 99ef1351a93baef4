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
#include "predtwin/geometry.hpp"
#include "predtwin/io.hpp"
#include "predtwin/rng.hpp"

using namespace predtwin;

TEST(Geometry, WrapAngleLandsInHalfOpenRange) {
    EXPECT_DOUBLE_EQ(wrap_angle(kPi), -kPi);
    EXPECT_DOUBLE_EQ(wrap_angle(-kPi), -kPi);
    EXPECT_NEAR(wrap_angle(3 * kPi + 0.25), -kPi + 0.25, 1e-12);
    EXPECT_NEAR(wrap_angle(0.5), 0.5, 0.0);
}

TEST(Geometry, MirrorAcrossHorizontalLine) {
    const Vec2 m = mirror_point({3, 4}, {0, 1}, {10, 1});
    EXPECT_NEAR(m.x, 3.0, 1e-12);
    EXPECT_NEAR(m.y, -2.0, 1e-12);
}

TEST(Geometry, SegmentIntersection) {
    EXPECT_TRUE(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
    EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    EXPECT_TRUE(segments_intersect({0, 0}, {1, 0}, {1, 0}, {1, 5}));  // touching endpoint
}

TEST(Geometry, PolygonHelpers) {
    const std::vector<Vec2> sq{{0, 0}, {20, 0}, {20, 20}, {0, 20}};
    EXPECT_DOUBLE_EQ(polygon_signed_area(sq), 400.0);
    EXPECT_TRUE(polygon_is_simple(sq));
    const std::vector<Vec2> bow{{0, 0}, {10, 10}, {10, 0}, {0, 10}};
    EXPECT_FALSE(polygon_is_simple(bow));
    EXPECT_TRUE(point_in_polygon({5, 5}, sq));
    EXPECT_FALSE(point_in_polygon({25, 5}, sq));
}

TEST(Rng, DeriveSeedIsOrderSensitiveAndStable) {
    EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
    EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
    const double u = hash_uniform(42);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
}

TEST(Rng, UniformIndexStaysInRange) {
    Engine e(5);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(uniform_index(e, 7), 7u);
}

TEST(Io, ShortestDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 123456789.125}) EXPECT_EQ(io::parse_double(io::fmt_double(v)), v);
}

TEST(Io, Sha256KnownVector) {
    EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
