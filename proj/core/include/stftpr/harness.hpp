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

#ifndef STFTPR_HARNESS_HPP
#define STFTPR_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stftpr/ambiguity.hpp"
#include "stftpr/bounds.hpp"
#include "stftpr/core.hpp"
#include "stftpr/rrr.hpp"

namespace stftpr {

inline constexpr int kSchemaVersion = 1;

std::vector<int> int_range(int first, int last);

struct ExperimentGrid {
  int N = 11;
  std::vector<int> K_list{2, 4, 6, 8};
  std::vector<int> L_range = int_range(1, 6);
  std::vector<int> W_range = int_range(1, 11);
  int trials = 100;
  std::uint64_t seed = 0;
  Distribution distribution = Distribution::RealGaussian;
  RrrConfig rrr;
  /// 0 picks std::thread::hardware_concurrency().
  int threads = 0;
};

struct GridRow {
  int K = 0;
  int L = 0;
  int W = 0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_iterations = 0.0;
  double mean_final_error = 0.0;
  /// Mean over the successful trials only; NaN when there were none.
  double mean_success_iterations = 0.0;
};

struct GridResult {
  std::vector<GridRow> rows;  // ordered by K, then L, then W
};

/// One RRR trial of the random-mask experiment. The trial seed is
/// derive_seed(grid.seed, {K, L, W, trial}), so any cell can be re-run alone.
RrrOutcome run_figure4_trial(const ExperimentGrid& grid, int K, int L, int W, int trial);
GridRow run_figure4_cell(const ExperimentGrid& grid, int K, int L, int W);
/// Throws InvalidArgument when some K * N exceeds N * R for an L in range.
GridResult run_figure4(const ExperimentGrid& grid);

std::vector<BoundCurveRow> run_figure1(int N, const std::vector<int>& L_list, const std::vector<int>& W_range);

enum class SweepKind { Known, Blind, PropA, PropB };

std::string to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& name);

/// For PropA / PropB only W and alpha are used.
struct SweepCase {
  SweepKind kind = SweepKind::Known;
  int N = 0;
  int W = 0;
  int L = 0;
  int alpha = 1;
};

struct SweepRow {
  SweepCase spec;
  int trials = 0;
  int unique = 0;           // unique and within 1e-6 of the truth
  int silently_wrong = 0;   // reported unique but farther than 1e-6
  double unique_fraction = 0.0;
  double mean_error = 0.0;  // over unique results; NaN when undefined
  double mean_runtime = 0.0;  // seconds per trial
  /// PropA / PropB: the fixed constructions passed.
  bool fixed_cases_pass = true;
};

/// Default acceptance-sized sweep: known N=16, W in {3,4,5}, L in {1,3};
/// blind N=12, W=3, L=1; PropA W in 2..6, alpha in {1,2}; PropB W in 3..5.
std::vector<SweepCase> default_sweep_cases();

std::vector<SweepRow> run_proof_solver_sweep(const std::vector<SweepCase>& cases, int trials, std::uint64_t seed,
                                             int threads = 0);

struct InvarianceSweepReport {
  int trials = 0;
  double max_deviation = 0.0;
  std::vector<int> alphas;  // distinct alpha values exercised, ascending
};

/// Random (params, pair, g) with N in [8, 32]; the first trials walk through
/// every alpha in 1..16 so all of them are exercised. `break_action` perturbs
/// the transformed pair, a negative control that must fail.
InvarianceSweepReport run_invariance_sweep(int trials, std::uint64_t seed, bool break_action = false);

std::string figure1_csv(const std::vector<BoundCurveRow>& rows);
std::string figure4_csv(const GridResult& result);
std::string proofsweep_csv(const std::vector<SweepRow>& rows);

struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> outputs;
};

/// Library version plus the source revision recorded at configure time.
std::string artifact_version();

/// JSON text; the only run-dependent field is "created".
std::string manifest_json(const RunManifest& manifest);

}  // namespace stftpr

#endif  // STFTPR_HARNESS_HPP
