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

#include "predtwin/rrm.hpp"
#include "predtwin/scene.hpp"

namespace predtwin {

/// Exact specular path from the mirror-image construction.
struct ImagePath {
    std::vector<int> surfaces;  ///< tracer surface ids, in bounce order
    std::vector<Vec2> points;   ///< tx, reflection points, rx (horizontal)
    double length = 0.0;        ///< 3D unfolded length, m
    double departure = 0.0;     ///< azimuth leaving tx, rad
    double arrival = 0.0;       ///< azimuth of the last leg arriving at rx, rad
};

/// Every specular path up to max_depth bounces in a scene made only of thin
/// walls (at most two). Walls are full height and double sided, as in the
/// tracer. Throws UnsupportedScene for buildings, vehicles, > 2 walls or
/// max_depth > 2.
std::vector<ImagePath> image_method_paths(const Scene& scene, const Vec3& tx, const Vec3& rx, int max_depth);

/// 20 log10(lambda / (4 pi d)).
double friis_gain_db(double distance, double carrier_hz);

/// Plain serial enumeration of all W^B beam states with the same tie rule as
/// exhaustive_solve (first strictly better state in lexicographic order).
RrmResult brute_force_rrm(const GainTensor& g, const LinkBudget& budget, const RrmParams& params);

}  // namespace predtwin
