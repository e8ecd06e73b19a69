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

#include "doctest.h"
#include "stftpr/ambiguity.hpp"
#include "stftpr/bounds.hpp"
#include "stftpr/proof_solver.hpp"
#include "stftpr/stft.hpp"

using namespace stftpr;

namespace {

MeasurementSet measure(const ProblemParams& p, const SignalPair& pair, const std::vector<MeasurementIndex>& idx) {
  return magnitudes(forward(p, pair), idx);
}

double self_consistency(const ProblemParams& p, const SignalPair& est, const MeasurementSet& ms) {
  const auto again = measure(p, est, ms.indices);
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    worst = std::max(worst, std::abs(again.magnitudes[k] - ms.magnitudes[k]));
    scale = std::max(scale, ms.magnitudes[k]);
  }
  return worst / scale;
}

}  // namespace

TEST_CASE("known-window recovery uses exactly the bound-sized set") {
  const auto p = make_params(16, 4, 1);
  for (int t = 0; t < 20; ++t) {
    Rng rng(derive_seed(100, {t}));
    const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
    const auto ms = measure(p, truth, known_window_measurement_set(p));
    const auto res = recover_known_window(ms, truth.w, p);
    CHECK(res.measurements_used == known_window_bound(p));
    REQUIRE(res.status == RecoveryStatus::Unique);
    CHECK(quotient_error(res.estimate, truth, p, Mode::KnownWindow) <= 1e-6);
    CHECK((res.estimate.w - truth.w).norm() == 0.0);
    CHECK(res.candidate_classes == 1);
  }
}

TEST_CASE("known-window recovery is blind to a global phase of the data") {
  const auto p = make_params(16, 5, 3);
  Rng rng(7);
  const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
  const auto idx = known_window_measurement_set(p);
  const auto a = recover_known_window(measure(p, truth, idx), truth.w, p);
  const SignalPair rotated{std::polar(1.0, 0.9) * truth.x, truth.w};
  const auto b = recover_known_window(measure(p, rotated, idx), truth.w, p);
  REQUIRE(a.status == RecoveryStatus::Unique);
  REQUIRE(b.status == RecoveryStatus::Unique);
  CHECK((a.estimate.x - b.estimate.x).norm() < 1e-9 * truth.x.norm());
}

TEST_CASE("known-window recovery with alpha > 1") {
  const auto p = make_params(16, 5, 2);
  int unique = 0;
  for (int t = 0; t < 10; ++t) {
    Rng rng(derive_seed(5, {t}));
    const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
    const auto ms = measure(p, truth, known_window_measurement_set(p));
    const auto res = recover_known_window(ms, truth.w, p);
    if (res.status == RecoveryStatus::Unique) {
      ++unique;
      CHECK(quotient_error(res.estimate, truth, p, Mode::KnownWindow) <= 1e-6);
    }
  }
  CHECK(unique >= 8);
}

TEST_CASE("known-window preconditions") {
  Rng rng(3);
  const auto p = make_params(16, 4, 1);
  const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
  auto ms = measure(p, truth, known_window_measurement_set(p));
  cvec w = truth.w;
  w[2] = 0.0;
  CHECK_THROWS_AS(recover_known_window(ms, w, p), InvalidArgument);
  MeasurementSet missing = ms;
  missing.indices.pop_back();
  missing.magnitudes.pop_back();
  CHECK_THROWS_AS(recover_known_window(missing, truth.w, p), InvalidArgument);
  const auto p1 = make_params(16, 1, 1);
  CHECK_THROWS_AS(recover_known_window(MeasurementSet{}, cvec::Ones(1), p1), InvalidArgument);
  const auto wide = make_params(16, 13, 1);
  CHECK_THROWS_AS(recover_known_window(MeasurementSet{}, cvec::Ones(13), wide), InvalidArgument);
  const auto short_n = make_params(8, 5, 1);
  CHECK_THROWS_AS(recover_known_window(MeasurementSet{}, cvec::Ones(5), short_n), InvalidArgument);
}

TEST_CASE("blind recovery returns the canonical orbit representative") {
  const auto p = make_params(12, 3, 1);
  const auto idx = blind_measurement_set_with_seam(p);
  for (int t = 0; t < 10; ++t) {
    Rng rng(derive_seed(200, {t}));
    const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
    const auto ms = measure(p, truth, idx);
    const auto res = recover_blind(ms, p);
    REQUIRE(res.status == RecoveryStatus::Unique);
    CHECK(quotient_error(res.estimate, truth, p, Mode::Blind) <= 1e-6);
    CHECK(self_consistency(p, res.estimate, ms) <= 1e-6);
    const auto canon = canonicalize(truth, p, Mode::Blind);
    CHECK((res.estimate.x - canon.pair.x).norm() <= 1e-6 * canon.pair.x.norm());

    const auto g = AmbiguityElement::random(p, rng);
    const auto res2 = recover_blind(measure(p, act(g, truth, p), idx), p);
    REQUIRE(res2.status == RecoveryStatus::Unique);
    CHECK((res2.estimate.x - res.estimate.x).norm() <= 1e-6 * res.estimate.x.norm());
    CHECK((res2.estimate.w - res.estimate.w).norm() <= 1e-6 * res.estimate.w.norm());
  }
}

TEST_CASE("recovered window differs from the truth by a phase ladder") {
  for (const auto& p : {make_params(12, 3, 1), make_params(16, 5, 2)}) {
    Rng rng(derive_seed(300, {p.N, p.W}));
    const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
    const auto res = recover_blind(measure(p, truth, blind_measurement_set_with_seam(p)), p);
    REQUIRE(res.status == RecoveryStatus::Unique);
    // q[n] = w'[n] / w[n] = c mu[(-n) mod alpha] omega^ceil(n / alpha): q[n + alpha] / q[n] is one constant.
    const cvec q = res.estimate.w.cwiseQuotient(truth.w);
    const complex step = q[p.alpha] / q[0];
    for (int n = 0; n + p.alpha < p.W; ++n) CHECK(std::abs(q[n + p.alpha] / q[n] - step) < 1e-6);
    CHECK(std::abs(std::abs(step) - 1.0) < 1e-6);
    const double k = std::arg(step) * p.R / kTwoPi;
    CHECK(std::abs(k - std::round(k)) < 1e-6);
  }
}

TEST_CASE("blind recovery without the seam is ambiguous") {
  const auto p = make_params(12, 3, 1);
  Rng rng(4);
  const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
  const auto ms = measure(p, truth, blind_measurement_set(p));
  const auto res = recover_blind(ms, p);
  CHECK(res.status == RecoveryStatus::Ambiguous);
  CHECK(res.measurements_used == blind_bound(p));
  ProofSolverOptions opt;
  opt.use_seam = false;
  const auto res2 = recover_blind(measure(p, truth, blind_measurement_set_with_seam(p)), p, opt);
  CHECK(res2.status == RecoveryStatus::Ambiguous);
}

TEST_CASE("blind preconditions") {
  CHECK_THROWS_AS(recover_blind(MeasurementSet{}, make_params(8, 7, 1)), InvalidArgument);
  CHECK_THROWS_AS(recover_blind(MeasurementSet{}, make_params(30, 11, 1)), InvalidArgument);
  CHECK_THROWS_AS(recover_blind(MeasurementSet{}, make_params(12, 3, 1)), InvalidArgument);
}

TEST_CASE("no unique result is silently wrong") {
  for (const auto& p : {make_params(16, 5, 1), make_params(16, 3, 3)}) {
    for (int t = 0; t < 30; ++t) {
      Rng rng(derive_seed(400, {p.W, t}));
      const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
      const auto res = recover_known_window(measure(p, truth, known_window_measurement_set(p)), truth.w, p);
      if (res.status == RecoveryStatus::Unique) {
        CHECK(quotient_error(res.estimate, truth, p, Mode::KnownWindow) <= 1e-6);
      } else {
        CHECK_FALSE(res.message.empty());
      }
    }
  }
}

TEST_CASE("consistent_known_pairs keeps only the true flip pair") {
  Rng rng(5);
  const auto p = make_params(16, 4, 1);
  const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
  const cvec y0 = section(p, truth, 0).entries;
  const cvec ya = section(p, truth, shift_index(p, 1)).entries;
  const auto classes = consistent_known_pairs(enumerate_flips(y0).candidates, enumerate_flips(ya).candidates, truth.w,
                                              p.alpha, 1e-6, 1e-4);
  REQUIRE(classes.size() == 1);
  const complex u = optimal_phase(classes[0].y0, y0);
  CHECK((u * classes[0].y0 - y0).norm() < 1e-8 * y0.norm());
  CHECK((u * classes[0].ya - ya).norm() < 1e-8 * ya.norm());
}

TEST_CASE("brute-force uniqueness checks on small windows") {
  Rng rng(6);
  const auto a3 = verify_proposition_A(3, 1, std::nullopt, 100, rng);
  CHECK(a3.fraction == 1.0);
  CHECK(a3.fixed_cases_pass);
  const auto a2 = verify_proposition_A(2, 1, std::nullopt, 50, rng);
  CHECK(a2.fraction == 1.0);
  const auto b4 = verify_proposition_B(4, 1, 100, rng);
  CHECK(b4.fraction == 1.0);
  CHECK(b4.fixed_cases_pass);
  const auto b5 = verify_proposition_B(5, 1, 20, rng);
  CHECK(b5.fixed_cases_pass);
  CHECK_THROWS_AS(verify_proposition_A(11, 1, std::nullopt, 1, rng), InvalidArgument);
  CHECK_THROWS_AS(verify_proposition_A(3, 3, std::nullopt, 1, rng), InvalidArgument);
  CHECK_THROWS_AS(verify_proposition_B(2, 1, 1, rng), InvalidArgument);
}

TEST_CASE("status strings") {
  CHECK(to_string(RecoveryStatus::Unique) == "unique");
  CHECK(to_string(RecoveryStatus::Ambiguous) == "ambiguous");
  CHECK(to_string(RecoveryStatus::Failed) == "failed");
}
