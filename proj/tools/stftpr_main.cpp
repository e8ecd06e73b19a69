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

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stftpr/ambiguity.hpp"
#include "stftpr/bounds.hpp"
#include "stftpr/harness.hpp"
#include "stftpr/io.hpp"
#include "stftpr/proof_solver.hpp"
#include "stftpr/rrr.hpp"
#include "stftpr/stft.hpp"

namespace fs = std::filesystem;
using namespace stftpr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAmbiguous = 3;
constexpr int kExitFailed = 4;

struct CliConfig {
  std::optional<int> N;
  std::string W;
  std::string L;
  std::string K;
  std::uint64_t seed = 0;
  std::optional<int> trials;
  RrrConfig rrr;
  int threads = 0;
  std::string distribution;
  std::string out_dir;
  std::string format = "text";

  std::string experiment;
  std::string mode;
  std::string instance_path;
  std::string measurements_path;
  std::string plan = "known";
  bool no_seam = false;
  bool break_action = false;
};

// "4", "1,3,5", "1:6" or a mix such as "1:3,7".
std::vector<int> parse_int_list(const std::string& spec, const char* name) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("--") + name + ": cannot parse '" + spec + "'");
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(to_int(item));
    } else {
      const int lo = to_int(item.substr(0, colon));
      const int hi = to_int(item.substr(colon + 1));
      if (hi < lo) throw InvalidArgument(std::string("--") + name + ": empty range '" + item + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw InvalidArgument(std::string("--") + name + " is empty");
  return out;
}

int single_int(const std::string& spec, const char* name) {
  if (spec.empty()) throw InvalidArgument(std::string("--") + name + " is required");
  const auto v = parse_int_list(spec, name);
  if (v.size() != 1) throw InvalidArgument(std::string("--") + name + " takes a single value here");
  return v.front();
}

ProblemParams params_from(const CliConfig& c) {
  if (!c.N) throw InvalidArgument("--N is required");
  const int N = *c.N;
  const int W = single_int(c.W, "W");
  const int L = single_int(c.L, "L");
  if (W > N) throw InvalidArgument("W must not exceed N");
  return make_params(N, W, L);
}

fs::path out_dir(const CliConfig& c) { return c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir); }

std::string csv_to_json(const std::string& csv) {
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (std::size_t i = 0; std::getline(ls, cell, ',') && i < header.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() && *end == '\0' && std::isfinite(v)) {
        row[header[i]] = v;
      } else if (cell == "nan" || cell == "inf" || cell == "-inf") {
        row[header[i]] = nullptr;
      } else {
        row[header[i]] = cell;
      }
    }
    rows.push_back(row);
  }
  return rows.dump(2) + '\n';
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Distribution distribution_or(const CliConfig& c, Distribution fallback) {
  return c.distribution.empty() ? fallback : distribution_from_string(c.distribution);
}

std::vector<std::pair<std::string, std::string>> rrr_config_entries(const RrrConfig& r) {
  return {{"beta", fmt(r.beta)},
          {"tol", fmt(r.tol)},
          {"max_iter", std::to_string(r.max_iter)},
          {"success_tol", fmt(r.success_tol)}};
}

void write_table(const CliConfig& c, const std::string& stem, const std::string& csv, RunManifest manifest) {
  const fs::path dir = out_dir(c);
  const bool json = c.format == "json";
  const fs::path table = dir / (stem + (json ? ".json" : ".csv"));
  write_text_file(table, json ? csv_to_json(csv) : csv);
  manifest.outputs.push_back(table.filename().string());
  const fs::path manifest_path = dir / (stem + ".manifest.json");
  write_text_file(manifest_path, manifest_json(manifest));
  std::cout << "wrote " << table.string() << " and " << manifest_path.string() << '\n';
}

int cmd_bound(const CliConfig& c) {
  const ProblemParams p = params_from(c);
  const BoundReport rep = bound_report(p);
  if (c.format == "json") {
    const nlohmann::ordered_json j{{"N", p.N},
                                   {"W", p.W},
                                   {"L", p.L},
                                   {"alpha", rep.alpha},
                                   {"R", p.R},
                                   {"known", rep.known_window_count},
                                   {"blind", rep.blind_count},
                                   {"cap_known", rep.four_N},
                                   {"cap_blind", rep.four_N_plus_2W}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "N=" << p.N << " W=" << p.W << " L=" << p.L << " alpha=" << rep.alpha << " R=" << p.R
              << " known=" << rep.known_window_count << " blind=" << rep.blind_count << " cap_known=" << rep.four_N
              << " cap_blind=" << rep.four_N_plus_2W << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const CliConfig& c) {
  RunManifest manifest;
  manifest.command = "simulate " + c.experiment;
  manifest.seed = c.seed;
  if (c.experiment == "figure4") {
    ExperimentGrid grid;
    grid.N = c.N.value_or(11);
    if (!c.K.empty()) grid.K_list = parse_int_list(c.K, "K");
    if (!c.L.empty()) grid.L_range = parse_int_list(c.L, "L");
    grid.W_range = c.W.empty() ? int_range(1, grid.N) : parse_int_list(c.W, "W");
    grid.trials = c.trials.value_or(100);
    grid.seed = c.seed;
    grid.distribution = distribution_or(c, Distribution::RealGaussian);
    grid.rrr = c.rrr;
    grid.threads = c.threads;
    manifest.config = {{"N", std::to_string(grid.N)},
                       {"K", c.K.empty() ? "2,4,6,8" : c.K},
                       {"L", c.L.empty() ? "1:6" : c.L},
                       {"W", c.W.empty() ? "1:" + std::to_string(grid.N) : c.W},
                       {"trials", std::to_string(grid.trials)},
                       {"distribution", to_string(grid.distribution)}};
    for (auto& e : rrr_config_entries(grid.rrr)) manifest.config.push_back(e);
    write_table(c, "figure4", figure4_csv(run_figure4(grid)), manifest);
    return kExitOk;
  }
  if (c.experiment == "figure1") {
    const int N = c.N.value_or(100);
    const auto Ls = c.L.empty() ? std::vector<int>{1, 2, 3, 4, 5, 7} : parse_int_list(c.L, "L");
    const auto Ws = c.W.empty() ? int_range(2, N) : parse_int_list(c.W, "W");
    manifest.config = {{"N", std::to_string(N)},
                       {"L", c.L.empty() ? "1,2,3,4,5,7" : c.L},
                       {"W", c.W.empty() ? "2:" + std::to_string(N) : c.W}};
    write_table(c, "figure1", figure1_csv(run_figure1(N, Ls, Ws)), manifest);
    return kExitOk;
  }
  // proofsweep
  std::vector<SweepCase> cases;
  if (c.mode.empty()) {
    cases = default_sweep_cases();
  } else {
    const SweepKind kind = sweep_kind_from_string(c.mode);
    const auto Ws = parse_int_list(c.W, "W");
    if (kind == SweepKind::Known || kind == SweepKind::Blind) {
      if (!c.N) throw InvalidArgument("--N is required");
      for (int W : Ws)
        for (int L : parse_int_list(c.L, "L")) cases.push_back({kind, *c.N, W, L, make_params(*c.N, W, L).alpha});
    } else {
      const auto alphas = c.L.empty() ? std::vector<int>{1} : parse_int_list(c.L, "L");
      for (int W : Ws)
        for (int a : alphas) cases.push_back({kind, 0, W, 0, a});
    }
  }
  const int trials = c.trials.value_or(100);
  manifest.config = {{"mode", c.mode.empty() ? "default" : c.mode},
                     {"N", c.N ? std::to_string(*c.N) : ""},
                     {"W", c.W},
                     {"L", c.L},
                     {"trials", std::to_string(trials)}};
  write_table(c, "proofsweep", proofsweep_csv(run_proof_solver_sweep(cases, trials, c.seed, c.threads)), manifest);
  return kExitOk;
}

Instance load_or_draw_instance(const CliConfig& c, Distribution fallback) {
  if (!c.instance_path.empty()) return instance_from_json(read_text_file(c.instance_path));
  Instance inst;
  inst.params = params_from(c);
  Rng rng(c.seed);
  inst.pair = random_pair(inst.params, distribution_or(c, fallback), rng);
  return inst;
}

MeasurementSet load_measurements(const std::string& path) {
  const std::string text = read_text_file(path);
  return fs::path(path).extension() == ".json" ? measurement_set_from_json(text) : measurement_set_from_csv(text);
}

int cmd_recover(const CliConfig& c) {
  const Mode mode = mode_from_string(c.mode);
  std::optional<Instance> inst;
  if (!c.instance_path.empty() || c.measurements_path.empty()) {
    inst = load_or_draw_instance(c, Distribution::ComplexGaussian);
  } else if (mode == Mode::KnownWindow) {
    throw InvalidArgument("known-window recovery from a measurement file needs --instance for the window");
  }
  const ProblemParams params = inst ? inst->params : params_from(c);
  MeasurementSet ms;
  if (!c.measurements_path.empty()) {
    ms = load_measurements(c.measurements_path);
  } else {
    const auto indices = mode == Mode::KnownWindow
                             ? known_window_measurement_set(params)
                             : (c.no_seam ? blind_measurement_set(params) : blind_measurement_set_with_seam(params));
    ms = magnitudes(forward(params, inst->pair), indices);
  }
  ProofSolverOptions options;
  options.use_seam = !c.no_seam;
  const RecoveryResult res = mode == Mode::KnownWindow ? recover_known_window(ms, inst->pair.w, params, options)
                                                       : recover_blind(ms, params, options);
  std::optional<double> err;
  if (inst && res.status == RecoveryStatus::Unique) err = quotient_error(res.estimate, inst->pair, params, mode);
  const std::string text = recovery_result_to_json(res, params, mode, err);
  std::cout << text;
  if (!c.out_dir.empty()) write_text_file(out_dir(c) / "recovery.json", text);
  switch (res.status) {
    case RecoveryStatus::Unique: return kExitOk;
    case RecoveryStatus::Ambiguous: return kExitAmbiguous;
    case RecoveryStatus::Failed: return kExitFailed;
  }
  return kExitFailed;
}

int cmd_measure(const CliConfig& c) {
  const Instance inst = load_or_draw_instance(c, Distribution::ComplexGaussian);
  const ProblemParams& p = inst.params;
  std::vector<MeasurementIndex> indices;
  if (c.plan == "known") {
    indices = known_window_measurement_set(p);
  } else if (c.plan == "blind") {
    indices = blind_measurement_set(p);
  } else if (c.plan == "blind-seam") {
    indices = blind_measurement_set_with_seam(p);
  } else if (c.plan == "full") {
    indices = full_grid(p);
  } else {
    const int K = c.K.empty() ? 8 : single_int(c.K, "K");
    Rng rng(derive_seed(c.seed, {1}));
    indices = random_mask(p, K * p.N, rng);
  }
  const MeasurementSet ms = magnitudes(forward(p, inst.pair), indices);
  const fs::path dir = out_dir(c);
  const bool json = c.format == "json";
  const fs::path mpath = dir / (json ? "measurements.json" : "measurements.csv");
  write_text_file(dir / "instance.json", instance_to_json(inst));
  write_text_file(mpath, json ? measurement_set_to_json(ms) : measurement_set_to_csv(ms));
  std::cout << "wrote " << (dir / "instance.json").string() << " and " << mpath.string() << " (" << ms.size()
            << " measurements)\n";
  return kExitOk;
}

int cmd_rrr(const CliConfig& c) {
  const Instance inst = load_or_draw_instance(c, Distribution::RealGaussian);
  const ProblemParams& p = inst.params;
  Rng rng(derive_seed(c.seed, {2}));
  MeasurementSet ms;
  if (!c.measurements_path.empty()) {
    ms = load_measurements(c.measurements_path);
  } else {
    const int K = c.K.empty() ? 8 : single_int(c.K, "K");
    if (K > p.R) throw InvalidArgument("K must not exceed R = N / gcd(L, N)");
    ms = magnitudes(forward(p, inst.pair), random_mask(p, K * p.N, rng));
  }
  const RrrOutcome out = rrr_solve(p, inst.pair.w, ms, c.rrr, rng, std::nullopt, inst.pair.x);
  const std::string text = rrr_outcome_to_json(out, p);
  std::cout << text;
  if (!c.out_dir.empty()) write_text_file(out_dir(c) / "rrr.json", text);
  return out.success.value_or(false) ? kExitOk : kExitFailed;
}

int cmd_verify(const CliConfig& c) {
  const int trials = c.trials.value_or(100);
  bool ok = true;
  const InvarianceSweepReport inv = run_invariance_sweep(std::max(trials, 16), c.seed, c.break_action);
  const bool inv_ok = inv.max_deviation <= 1e-10;
  ok = ok && inv_ok;
  std::cout << (inv_ok ? "PASS" : "FAIL") << " invariance: " << inv.trials << " trials, " << inv.alphas.size()
            << " alpha values, max deviation " << fmt(inv.max_deviation) << '\n';

  std::vector<SweepCase> cases;
  for (const SweepCase& sc : default_sweep_cases())
    if (sc.kind == SweepKind::PropA || sc.kind == SweepKind::PropB) cases.push_back(sc);
  for (const SweepRow& row : run_proof_solver_sweep(cases, trials, c.seed, c.threads)) {
    const bool row_ok = row.unique == row.trials && row.fixed_cases_pass;
    ok = ok && row_ok;
    std::cout << (row_ok ? "PASS" : "FAIL") << ' ' << to_string(row.spec.kind) << " W=" << row.spec.W
              << " alpha=" << row.spec.alpha << ": unique " << row.unique << '/' << row.trials << ", fixed cases "
              << (row.fixed_cases_pass ? "ok" : "failed") << '\n';
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval from periodic STFT magnitudes"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file supplying option defaults");

  CliConfig c;
  app.add_option("--N", c.N, "signal length");
  app.add_option("--W", c.W, "window length (list or a:b range for simulate)");
  app.add_option("--L", c.L, "separation (list or a:b range for simulate)");
  app.add_option("--K", c.K, "measurements per signal entry (list for simulate)");
  app.add_option("--seed", c.seed, "seed for every random draw")->capture_default_str();
  app.add_option("--trials", c.trials, "trials per cell");
  app.add_option("--beta", c.rrr.beta, "RRR relaxation")->capture_default_str();
  app.add_option("--tol", c.rrr.tol, "RRR stopping ratio")->capture_default_str();
  app.add_option("--max-iter", c.rrr.max_iter, "RRR iteration cap")->capture_default_str();
  app.add_option("--success-tol", c.rrr.success_tol, "success threshold on the relative error")
      ->capture_default_str();
  app.add_option("--threads", c.threads, "worker threads, 0 for all cores")->capture_default_str();
  app.add_option("--distribution", c.distribution, "complex or real");
  app.add_option("--out", c.out_dir, "output directory")->envname("STFTPR_OUT_DIR");
  app.add_option("--format", c.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  CLI::App* bound = app.add_subcommand("bound", "print the measurement bounds for (N, W, L)");
  CLI::App* simulate = app.add_subcommand("simulate", "run an experiment grid and write CSV plus a manifest");
  simulate->add_option("experiment", c.experiment, "figure4, figure1 or proofsweep")
      ->required()
      ->check(CLI::IsMember({"figure4", "figure1", "proofsweep"}));
  simulate->add_option("--mode", c.mode, "proofsweep: known, blind, propA or propB");
  CLI::App* recover = app.add_subcommand("recover", "constructive recovery from the bound-sized measurement set");
  recover->add_option("mode", c.mode, "known or blind")->required()->check(CLI::IsMember({"known", "blind"}));
  recover->add_option("--instance", c.instance_path, "instance JSON (otherwise drawn from --seed)");
  recover->add_option("--measurements", c.measurements_path, "measurement CSV or JSON");
  recover->add_flag("--no-seam", c.no_seam, "blind: use only the bound-sized set");
  CLI::App* measure = app.add_subcommand("measure", "draw an instance and write it with a measurement set");
  measure->add_option("--plan", c.plan, "known, blind, blind-seam, full or random")
      ->check(CLI::IsMember({"known", "blind", "blind-seam", "full", "random"}))
      ->capture_default_str();
  measure->add_option("--instance", c.instance_path, "instance JSON (otherwise drawn from --seed)");
  CLI::App* rrr = app.add_subcommand("rrr", "one RRR solve on a random mask of K N entries");
  rrr->add_option("--instance", c.instance_path, "instance JSON (otherwise drawn from --seed)");
  rrr->add_option("--measurements", c.measurements_path, "measurement CSV or JSON");
  CLI::App* verify = app.add_subcommand("verify", "invariance and brute-force uniqueness checks");
  verify->add_flag("--break-action", c.break_action, "test hook")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (bound->parsed()) return cmd_bound(c);
    if (simulate->parsed()) return cmd_simulate(c);
    if (recover->parsed()) return cmd_recover(c);
    if (measure->parsed()) return cmd_measure(c);
    if (rrr->parsed()) return cmd_rrr(c);
    if (verify->parsed()) return cmd_verify(c);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
