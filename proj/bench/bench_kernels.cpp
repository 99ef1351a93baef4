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

// Serial reference kernels against their OpenMP counterparts. Both paths must
// give identical results; this only compares speed.

#include <benchmark/benchmark.h>

#include "predtwin/fidelity.hpp"
#include "predtwin/mobility.hpp"

using namespace predtwin;

namespace {

Scene bench_scene() {
    GridCitySpec gs;
    gs.rsu_nodes = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    gs.extra_buildings = 1;
    Scene s = build_scene(make_grid_city(gs));
    const Trace tr = generate_traffic(generate_network(3, 3, 100.0), 25, {}, 7, 2.0, 0.1);
    return update_poses(s, sample_poses(tr, 1.0), 2, tr.kinds());
}

void BM_Trace(benchmark::State& state) {
    static const Scene scene = bench_scene();
    const FidelityConfig cfg{6, state.range(0), 10 * state.range(0), false, false, 2};
    const bool parallel = state.range(1) != 0;
    const RadioSetup radio;
    for (auto _ : state) benchmark::DoNotOptimize(compute_channels(scene, cfg, radio, 3, parallel));
    state.SetLabel(parallel ? "openmp" : "serial");
}
BENCHMARK(BM_Trace)->Args({10000, 0})->Args({10000, 1})->Args({100000, 0})->Args({100000, 1})->Unit(benchmark::kMillisecond);

void BM_GainTensor(benchmark::State& state) {
    static const Scene scene = bench_scene();
    static const ChannelSnapshot snap = compute_channels(scene, {6, 10000, 100000, false, false, 2}, RadioSetup{}, 3, false);
    const Codebook cb = dft_codebook(16, 64);
    const bool parallel = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(build_gain_tensor(snap.h, cb, parallel));
    state.SetLabel(parallel ? "openmp" : "serial");
}
BENCHMARK(BM_GainTensor)->Arg(0)->Arg(1);

void BM_Icd(benchmark::State& state) {
    const GainTensor g = random_instance(static_cast<int>(state.range(0)), 16, 40, 11);
    RrmParams p;
    p.parallel = state.range(1) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(icd_solve(g, LinkBudget{}, p));
    state.SetLabel(p.parallel ? "openmp" : "serial");
}
BENCHMARK(BM_Icd)->Args({4, 0})->Args({4, 1})->Args({8, 0})->Args({8, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
