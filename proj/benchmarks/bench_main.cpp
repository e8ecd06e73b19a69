// Copyright 2026 The stftpr Authors.
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

#include "stftpr/bounds.hpp"
#include "stftpr/proof_solver.hpp"
#include "stftpr/rrr.hpp"
#include "stftpr/stft.hpp"

using namespace stftpr;

static void BM_Forward(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto p = make_params(N, N / 4 + 1, 1);
  Rng rng(1);
  const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
  for (auto _ : state) benchmark::DoNotOptimize(forward(p, pair));
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(64)->Arg(128);

static void BM_RrrIteration(benchmark::State& state) {
  const auto p = make_params(11, 8, static_cast<int>(state.range(0)));
  Rng rng(2);
  const auto truth = random_pair(p, Distribution::RealGaussian, rng);
  const auto ms = magnitudes(forward(p, truth), random_mask(p, std::min(8, p.R) * p.N, rng));
  RrrConfig cfg;
  cfg.max_iter = 100;
  cfg.tol = 1e-300;
  for (auto _ : state) benchmark::DoNotOptimize(rrr_solve(p, truth.w, ms, cfg, rng));
  state.SetItemsProcessed(state.iterations() * cfg.max_iter);
}
BENCHMARK(BM_RrrIteration)->Arg(1)->Arg(3);

static void BM_KnownWindowRecovery(benchmark::State& state) {
  const auto p = make_params(16, static_cast<int>(state.range(0)), 1);
  Rng rng(3);
  const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
  const auto ms = magnitudes(forward(p, truth), known_window_measurement_set(p));
  for (auto _ : state) benchmark::DoNotOptimize(recover_known_window(ms, truth.w, p));
}
BENCHMARK(BM_KnownWindowRecovery)->Arg(3)->Arg(5);

static void BM_BlindRecovery(benchmark::State& state) {
  const auto p = make_params(12, 3, 1);
  Rng rng(4);
  const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
  const auto ms = magnitudes(forward(p, truth), blind_measurement_set_with_seam(p));
  for (auto _ : state) benchmark::DoNotOptimize(recover_blind(ms, p));
}
BENCHMARK(BM_BlindRecovery);
BENCHMARK_MAIN();
