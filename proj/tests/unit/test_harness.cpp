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

#include <sstream>

#include "doctest.h"
#include "stftpr/harness.hpp"

using namespace stftpr;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("figure-1 table") {
  const auto rows = run_figure1(100, {1, 2, 3, 4, 5, 7}, int_range(2, 100));
  CHECK(rows.size() == 6 * 99);
  for (const auto& r : rows) {
    const auto p = make_params(100, r.W, r.L);
    if (r.W + p.alpha <= 100) CHECK(r.known < 400);
  }
  CHECK(run_figure1(100, {4}, {10}).size() == 1);
  const auto csv = lines(figure1_csv(run_figure1(100, {4}, {10})));
  REQUIRE(csv.size() == 2);
  CHECK(csv[0] == "L,W,known,blind,cap_known,cap_blind,schema_version");
  CHECK(csv[1] == "4,10,361,365,400,420,1");
}

TEST_CASE("figure-4 cells are reproducible and counted exactly") {
  ExperimentGrid g;
  g.K_list = {8};
  g.L_range = {3};
  g.W_range = {8};
  g.trials = 5;
  g.seed = 3;
  const auto a = run_figure4(g);
  const auto b = run_figure4(g);
  REQUIRE(a.rows.size() == 1);
  CHECK(a.rows[0].success_rate == b.rows[0].success_rate);
  CHECK(a.rows[0].mean_iterations == b.rows[0].mean_iterations);
  CHECK(a.rows[0].success_rate * g.trials == doctest::Approx(a.rows[0].successes));
  CHECK(figure4_csv(a) == figure4_csv(b));

  // one trial re-run on its own matches the cell aggregate
  ExperimentGrid one = g;
  one.trials = 1;
  const auto single = run_figure4_trial(g, 8, 3, 8, 0);
  CHECK(run_figure4_cell(one, 8, 3, 8).mean_iterations == single.iterations);
}

TEST_CASE("figure-4 grid shape and threading do not change results") {
  ExperimentGrid g;
  g.K_list = {2, 8};
  g.L_range = {1, 2};
  g.W_range = {3, 4, 5};
  g.trials = 2;
  g.rrr.max_iter = 300;
  g.threads = 1;
  const auto serial = run_figure4(g);
  g.threads = 3;
  const auto parallel = run_figure4(g);
  CHECK(serial.rows.size() == 12);
  CHECK(figure4_csv(serial) == figure4_csv(parallel));
  CHECK(lines(figure4_csv(serial)).size() == 13);
}

TEST_CASE("figure-4 rejects infeasible K") {
  ExperimentGrid g;
  g.K_list = {12};
  g.L_range = {1};
  g.W_range = {3};
  g.trials = 1;
  CHECK_THROWS_AS(run_figure4(g), InvalidArgument);
  g.K_list = {4};
  g.trials = 0;
  CHECK_THROWS_AS(run_figure4(g), InvalidArgument);
}

TEST_CASE("proof-solver sweep rows") {
  const std::vector<SweepCase> cases{{SweepKind::Known, 16, 4, 1, 1},
                                     {SweepKind::Blind, 12, 3, 1, 1},
                                     {SweepKind::PropA, 0, 3, 0, 1}};
  const auto rows = run_proof_solver_sweep(cases, 20, 1);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].unique_fraction >= 0.95);
  CHECK(rows[0].silently_wrong == 0);
  CHECK(rows[1].unique_fraction >= 0.9);
  CHECK(rows[2].unique_fraction == 1.0);
  const auto csv = lines(proofsweep_csv(rows));
  REQUIRE(csv.size() == 4);
  CHECK(csv[0].rfind("mode,N,W,L,alpha,trials,unique_fraction", 0) == 0);
  CHECK(csv[1].rfind("known,16,4,1,1,20,", 0) == 0);
  CHECK(csv[3].rfind("propA,0,3,0,1,20,1,", 0) == 0);
}

TEST_CASE("default sweep covers every mode") {
  const auto cases = default_sweep_cases();
  int counts[4] = {0, 0, 0, 0};
  for (const auto& c : cases) ++counts[static_cast<int>(c.kind)];
  CHECK(counts[0] == 6);
  CHECK(counts[1] == 1);
  CHECK(counts[2] == 9);
  CHECK(counts[3] == 3);
  CHECK(sweep_kind_from_string("propB") == SweepKind::PropB);
  CHECK_THROWS_AS(sweep_kind_from_string("other"), InvalidArgument);
}

TEST_CASE("invariance sweep exercises alpha 1 through 16") {
  const auto rep = run_invariance_sweep(40, 2);
  CHECK(rep.max_deviation <= 1e-10);
  CHECK(rep.alphas.size() == 16);
  const auto broken = run_invariance_sweep(5, 2, true);
  CHECK(broken.max_deviation > 1e-3);
}

TEST_CASE("manifest carries the seed, config and version") {
  RunManifest m;
  m.command = "simulate figure1";
  m.seed = 17;
  m.config = {{"N", "100"}};
  m.outputs = {"figure1.csv"};
  const std::string json = manifest_json(m);
  CHECK(json.find("\"seed\": 17") != std::string::npos);
  CHECK(json.find("\"N\": \"100\"") != std::string::npos);
  CHECK(json.find(artifact_version()) != std::string::npos);
  CHECK(json.find("\"created\"") != std::string::npos);
}
