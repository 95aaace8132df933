// Copyright 2026 The fluosq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "fluosq/approx.hpp"
#include "fluosq/cavity.hpp"
#include "fluosq/freespace.hpp"
#include "fluosq/observables.hpp"

namespace {

fluosq::SystemParams reference_params() {
  fluosq::SystemParams p;
  p.gamma = 1.0 / 23.0;
  p.kappa = 1.58;
  p.g = 1.0;
  p.rabi = 14.0;
  p.delta_x = -19.29;
  p.delta_c = -34.0;
  return p;
}

void BM_BuildLiouvillian(benchmark::State& state) {
  const fluosq::SystemParams p = reference_params();
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fluosq::build_liouvillian(p, n_max));
  }
}
BENCHMARK(BM_BuildLiouvillian)->Arg(2)->Arg(8)->Arg(16)->Arg(32);

void BM_SteadyStateSolve(benchmark::State& state) {
  const fluosq::SystemParams p = reference_params();
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fluosq::solve_steady_state(p, n_max));
  }
}
BENCHMARK(BM_SteadyStateSolve)->Arg(2)->Arg(8)->Arg(16);

void BM_ConvergedSolve(benchmark::State& state) {
  const fluosq::SystemParams p = reference_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fluosq::converged_steady_state(p, 1e-8));
  }
}
BENCHMARK(BM_ConvergedSolve);

void BM_FreeSpaceSteadyState(benchmark::State& state) {
  const fluosq::FreeSpaceParams p{1.0, 0.4, 0.2, 1.3, 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fluosq::steady_state(p));
  }
}
BENCHMARK(BM_FreeSpaceSteadyState);

void BM_OptimizePhase(benchmark::State& state) {
  const fluosq::QubitState q{0.22, {0.4, 0.03}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fluosq::optimize_phase(q));
  }
}
BENCHMARK(BM_OptimizePhase);

}  // namespace

BENCHMARK_MAIN();
