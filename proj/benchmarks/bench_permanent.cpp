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

#include "photinject/circuit.hpp"
#include "photinject/permanent.hpp"

namespace {

void BM_PermanentExact(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto a = photinject::haar_unitary(n, 17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(photinject::permanent_exact(a));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_PermanentExact)->DenseRange(4, 16, 2);

void BM_PermanentNaive(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto a = photinject::haar_unitary(n, 17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(photinject::permanent_naive(a));
    }
}
BENCHMARK(BM_PermanentNaive)->DenseRange(4, 8, 2);

void BM_Gurvits(benchmark::State &state) {
    const auto a = photinject::haar_unitary(static_cast<int>(state.range(0)), 3);
    const auto samples = static_cast<std::uint64_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(photinject::gurvits_estimate(a, samples, 11));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * samples));
}
BENCHMARK(BM_Gurvits)->Args({8, 1 << 12})->Args({16, 1 << 12});

}  // namespace
