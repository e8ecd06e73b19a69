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

#include "stftpr/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "json.hpp"
#include "stftpr/ambiguity.hpp"
#include "stftpr/proof_solver.hpp"
#include "stftpr/stft.hpp"

#ifndef STFTPR_VERSION
#define STFTPR_VERSION "0.0.0"
#endif
#ifndef STFTPR_REVISION
#define STFTPR_REVISION "unknown"
#endif

namespace stftpr {

namespace {

constexpr double kUniqueTol = 1e-6;

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception is rethrown after all workers have stopped.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::int64_t kind_code(SweepKind kind) { return static_cast<std::int64_t>(kind); }

}  // namespace

std::vector<int> int_range(int first, int last) {
  std::vector<int> out;
  for (int v = first; v <= last; ++v) out.push_back(v);
  return out;
}

RrrOutcome run_figure4_trial(const ExperimentGrid& grid, int K, int L, int W, int trial) {
  const ProblemParams params = make_params(grid.N, W, L);
  Rng rng(derive_seed(grid.seed, {K, L, W, trial}));
  const SignalPair truth = random_pair(params, grid.distribution, rng);
  const auto mask = random_mask(params, K * grid.N, rng);
  const MeasurementSet measured = magnitudes(forward(params, truth), mask);
  return rrr_solve(params, truth.w, measured, grid.rrr, rng, std::nullopt, truth.x);
}

GridRow run_figure4_cell(const ExperimentGrid& grid, int K, int L, int W) {
  if (grid.trials < 1) throw InvalidArgument("trials must be at least 1");
  GridRow row;
  row.K = K;
  row.L = L;
  row.W = W;
  row.trials = grid.trials;
  double iterations = 0.0;
  double success_iterations = 0.0;
  double error = 0.0;
  for (int t = 0; t < grid.trials; ++t) {
    const RrrOutcome out = run_figure4_trial(grid, K, L, W, t);
    iterations += out.iterations;
    error += out.error.value_or(std::numeric_limits<double>::quiet_NaN());
    if (out.success.value_or(false)) {
      ++row.successes;
      success_iterations += out.iterations;
    }
  }
  row.success_rate = static_cast<double>(row.successes) / grid.trials;
  row.mean_iterations = iterations / grid.trials;
  row.mean_final_error = error / grid.trials;
  row.mean_success_iterations =
      row.successes > 0 ? success_iterations / row.successes : std::numeric_limits<double>::quiet_NaN();
  return row;
}

GridResult run_figure4(const ExperimentGrid& grid) {
  if (grid.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (grid.N < 1) throw InvalidArgument("N must be positive");
  struct Cell {
    int K, L, W;
  };
  std::vector<Cell> cells;
  for (int K : grid.K_list) {
    if (K < 0) throw InvalidArgument("K must be nonnegative");
    for (int L : grid.L_range) {
      for (int W : grid.W_range) {
        const ProblemParams params = make_params(grid.N, W, L);
        if (K > params.R) {
          throw InvalidArgument("K = " + std::to_string(K) + " asks for more than the N * R = " +
                                std::to_string(params.N * params.R) + " entries available at L = " +
                                std::to_string(L));
        }
        cells.push_back({K, L, W});
      }
    }
  }
  GridResult result;
  result.rows.resize(cells.size());
  parallel_for(cells.size(), grid.threads, [&](std::size_t i) {
    result.rows[i] = run_figure4_cell(grid, cells[i].K, cells[i].L, cells[i].W);
  });
  return result;
}

std::vector<BoundCurveRow> run_figure1(int N, const std::vector<int>& L_list, const std::vector<int>& W_range) {
  return bound_curves(N, L_list, W_range);
}

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Known: return "known";
    case SweepKind::Blind: return "blind";
    case SweepKind::PropA: return "propA";
    case SweepKind::PropB: return "propB";
  }
  return "unknown";
}

SweepKind sweep_kind_from_string(const std::string& name) {
  for (SweepKind k : {SweepKind::Known, SweepKind::Blind, SweepKind::PropA, SweepKind::PropB}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown sweep mode '" + name + "'");
}

std::vector<SweepCase> default_sweep_cases() {
  std::vector<SweepCase> cases;
  for (int W : {3, 4, 5})
    for (int L : {1, 3}) cases.push_back({SweepKind::Known, 16, W, L, make_params(16, W, L).alpha});
  cases.push_back({SweepKind::Blind, 12, 3, 1, 1});
  for (int W = 2; W <= 6; ++W)
    for (int alpha : {1, 2})
      if (alpha < W) cases.push_back({SweepKind::PropA, 0, W, 0, alpha});
  for (int W = 3; W <= 5; ++W) cases.push_back({SweepKind::PropB, 0, W, 0, 1});
  return cases;
}

namespace {

SweepRow run_sweep_case(const SweepCase& c, int trials, std::uint64_t seed) {
  SweepRow row;
  row.spec = c;
  row.trials = trials;
  const auto start = std::chrono::steady_clock::now();
  if (c.kind == SweepKind::PropA || c.kind == SweepKind::PropB) {
    Rng rng(derive_seed(seed, {kind_code(c.kind), c.W, c.alpha}));
    const PropositionReport rep = c.kind == SweepKind::PropA
                                      ? verify_proposition_A(c.W, c.alpha, std::nullopt, trials, rng)
                                      : verify_proposition_B(c.W, c.alpha, trials, rng);
    row.unique = rep.unique;
    row.unique_fraction = rep.fraction;
    row.fixed_cases_pass = rep.fixed_cases_pass;
    row.mean_error = std::numeric_limits<double>::quiet_NaN();
  } else {
    const ProblemParams params = make_params(c.N, c.W, c.L);
    row.spec.alpha = params.alpha;
    const Mode mode = c.kind == SweepKind::Known ? Mode::KnownWindow : Mode::Blind;
    const auto indices =
        mode == Mode::KnownWindow ? known_window_measurement_set(params) : blind_measurement_set_with_seam(params);
    double error_sum = 0.0;
    int unique_results = 0;
    for (int t = 0; t < trials; ++t) {
      Rng rng(derive_seed(seed, {kind_code(c.kind), c.N, c.W, c.L, t}));
      const SignalPair truth = random_pair(params, Distribution::ComplexGaussian, rng);
      const MeasurementSet ms = magnitudes(forward(params, truth), indices);
      const RecoveryResult res =
          mode == Mode::KnownWindow ? recover_known_window(ms, truth.w, params) : recover_blind(ms, params);
      if (res.status != RecoveryStatus::Unique) continue;
      const double err = quotient_error(res.estimate, truth, params, mode);
      ++unique_results;
      error_sum += err;
      if (err <= kUniqueTol) {
        ++row.unique;
      } else {
        ++row.silently_wrong;
      }
    }
    row.unique_fraction = static_cast<double>(row.unique) / trials;
    row.mean_error = unique_results > 0 ? error_sum / unique_results : std::numeric_limits<double>::quiet_NaN();
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  row.mean_runtime = elapsed.count() / trials;
  return row;
}

}  // namespace

std::vector<SweepRow> run_proof_solver_sweep(const std::vector<SweepCase>& cases, int trials, std::uint64_t seed,
                                             int threads) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  std::vector<SweepRow> rows(cases.size());
  parallel_for(cases.size(), threads, [&](std::size_t i) { rows[i] = run_sweep_case(cases[i], trials, seed); });
  return rows;
}

InvarianceSweepReport run_invariance_sweep(int trials, std::uint64_t seed, bool break_action) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  constexpr int kMinN = 8;
  constexpr int kMaxN = 32;
  constexpr int kMaxAlpha = kMaxN / 2;
  InvarianceSweepReport rep;
  rep.trials = trials;
  std::vector<bool> seen(kMaxAlpha + 1, false);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, {t}));
    int N = 0;
    int L = 0;
    if (t < kMaxAlpha) {
      // alpha = t + 1: N a multiple of alpha above it, L = alpha k with k coprime to N / alpha.
      const int alpha = t + 1;
      std::vector<int> multiples;
      for (int n = std::max(kMinN, 2 * alpha); n <= kMaxN; ++n)
        if (n % alpha == 0) multiples.push_back(n);
      N = multiples[static_cast<std::size_t>(rng.uniform(0.0, 1.0) * multiples.size()) % multiples.size()];
      std::vector<int> ks;
      for (int k = 1; k < N / alpha; ++k)
        if (std::gcd(k, N / alpha) == 1) ks.push_back(k);
      L = alpha * ks[static_cast<std::size_t>(rng.uniform(0.0, 1.0) * ks.size()) % ks.size()];
    } else {
      N = kMinN + static_cast<int>(rng.uniform(0.0, 1.0) * (kMaxN - kMinN + 1)) % (kMaxN - kMinN + 1);
      L = 1 + static_cast<int>(rng.uniform(0.0, 1.0) * N) % N;
    }
    const int W = 1 + static_cast<int>(rng.uniform(0.0, 1.0) * N) % N;
    const ProblemParams params = make_params(N, W, L);
    const SignalPair pair = random_pair(params, Distribution::ComplexGaussian, rng);
    const AmbiguityElement g = AmbiguityElement::random(params, rng);
    double dev = 0.0;
    if (break_action) {
      SignalPair moved = act(g, pair, params);
      moved.x[0] *= 1.5;
      const rmat a = forward(params, pair).matrix().cwiseAbs();
      const rmat b = forward(params, moved).matrix().cwiseAbs();
      dev = (a - b).cwiseAbs().maxCoeff() / a.maxCoeff();
    } else {
      dev = verify_invariance(g, pair, params);
    }
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (params.alpha <= kMaxAlpha) seen[static_cast<std::size_t>(params.alpha)] = true;
  }
  for (int a = 1; a <= kMaxAlpha; ++a)
    if (seen[static_cast<std::size_t>(a)]) rep.alphas.push_back(a);
  return rep;
}

std::string figure1_csv(const std::vector<BoundCurveRow>& rows) {
  std::string out = "L,W,known,blind,cap_known,cap_blind,schema_version\n";
  for (const auto& r : rows) {
    out += std::to_string(r.L) + ',' + std::to_string(r.W) + ',' + std::to_string(r.known) + ',' +
           std::to_string(r.blind) + ',' + std::to_string(r.cap_known) + ',' + std::to_string(r.cap_blind) + ',' +
           std::to_string(kSchemaVersion) + '\n';
  }
  return out;
}

std::string figure4_csv(const GridResult& result) {
  std::string out = "K,L,W,success_rate,mean_iterations,mean_final_error,mean_success_iterations,schema_version\n";
  for (const auto& r : result.rows) {
    out += std::to_string(r.K) + ',' + std::to_string(r.L) + ',' + std::to_string(r.W) + ',' + fmt(r.success_rate) +
           ',' + fmt(r.mean_iterations) + ',' + fmt(r.mean_final_error) + ',' + fmt(r.mean_success_iterations) +
           ',' + std::to_string(kSchemaVersion) + '\n';
  }
  return out;
}

std::string proofsweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "mode,N,W,L,alpha,trials,unique_fraction,silently_wrong,fixed_cases_pass,mean_error,mean_runtime,"
      "schema_version\n";
  for (const auto& r : rows) {
    out += to_string(r.spec.kind) + ',' + std::to_string(r.spec.N) + ',' + std::to_string(r.spec.W) + ',' +
           std::to_string(r.spec.L) + ',' + std::to_string(r.spec.alpha) + ',' + std::to_string(r.trials) + ',' +
           fmt(r.unique_fraction) + ',' + std::to_string(r.silently_wrong) + ',' + (r.fixed_cases_pass ? "1" : "0") +
           ',' + fmt(r.mean_error) + ',' + fmt(r.mean_runtime) + ',' + std::to_string(kSchemaVersion) + '\n';
  }
  return out;
}

std::string artifact_version() { return std::string(STFTPR_VERSION) + "+" + STFTPR_REVISION; }

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest.config) config[k] = v;

  char created[32];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(created, sizeof created, "%Y-%m-%dT%H:%M:%SZ", &utc);

  const nlohmann::ordered_json j{{"artifact", "stftpr"},
                                 {"version", artifact_version()},
                                 {"schema_version", kSchemaVersion},
                                 {"command", manifest.command},
                                 {"seed", manifest.seed},
                                 {"config", config},
                                 {"outputs", manifest.outputs},
                                 {"created", created}};
  return j.dump(2) + '\n';
}

}  // namespace stftpr
