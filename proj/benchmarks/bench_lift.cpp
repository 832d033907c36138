// Copyright 2026 The photinject Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include "photinject/analysis.hpp"
#include "photinject/circuit.hpp"
#include "photinject/lift.hpp"

namespace {

void BM_LiftUnitary(benchmark::State &state) {
    const int m = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    const photinject::FockBasis basis(m, n);
    const auto u = photinject::haar_unitary(m, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(photinject::lift_unitary(u, basis));
    }
    state.counters["dim"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_LiftUnitary)->Args({4, 2})->Args({6, 3})->Args({8, 3})->Args({8, 4});

void BM_StateJacobian(benchmark::State &state) {
    photinject::BlockPipelineOptions o;
    o.modes = static_cast<int>(state.range(0));
    o.photons = static_cast<int>(state.range(1));
    o.blocks = 2;
    o.seed = 9;
    const auto pc = photinject::make_block_pipeline(o);
    const auto theta = photinject::sample_theta(pc.parameter_count(), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(photinject::state_jacobian(pc, theta));
    }
}
BENCHMARK(BM_StateJacobian)->Args({4, 2})->Args({6, 3})->Unit(benchmark::kMillisecond);

}  // namespace
