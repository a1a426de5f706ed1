// Copyright 2026 The rwsim Authors
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

// Serial reference vs OpenMP batch. Both produce identical counts; only the
// wall time differs.

#include <benchmark/benchmark.h>

#include "rwsim/experiments.hpp"

using namespace rwsim;

namespace {

TrialModel bench_model() {
    ExperimentConfig cfg;
    cfg.noise.jitter_sigma = 0.5e-9;
    cfg.noise.epsilon = 0.05;
    cfg.geometry.path_s_to_b = cfg.geometry.path_s_to_a + 0.1;
    return TrialModel::build(cfg, AliceSetup::both());
}

void BM_BatchSerial(benchmark::State &state) {
    auto model = bench_model();
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_batch_serial(model, 7, n));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchParallel(benchmark::State &state) {
    auto model = bench_model();
    const auto n = static_cast<std::uint64_t>(state.range(0));
    const RunOptions opts{static_cast<int>(state.range(1))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_batch(model, 7, n, opts));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)
    ->ArgsProduct({{1 << 16, 1 << 20}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
