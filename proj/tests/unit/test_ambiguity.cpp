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
#include "oracles.hpp"
#include "stftpr/ambiguity.hpp"
#include "stftpr/stft.hpp"

using namespace stftpr;

namespace {

double pair_distance(const SignalPair& a, const SignalPair& b) {
  return std::sqrt((a.x - b.x).squaredNorm() + (a.w - b.w).squaredNorm()) / std::sqrt(b.x.squaredNorm() + b.w.squaredNorm());
}

ProblemParams random_params(Rng& rng) {
  const int N = 8 + static_cast<int>(rng.uniform(0, 25)) % 25;
  const int L = 1 + static_cast<int>(rng.uniform(0, N)) % N;
  const int W = 1 + static_cast<int>(rng.uniform(0, N)) % N;
  return make_params(N, W, L);
}

}  // namespace

TEST_CASE("identity and global phase") {
  Rng rng(1);
  const auto p = make_params(12, 5, 4);
  const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
  const auto id = act(AmbiguityElement::identity(p), pair, p);
  CHECK(pair_distance(id, pair) == 0.0);
  CHECK(verify_invariance(AmbiguityElement::identity(p), pair, p) == 0.0);
  AmbiguityElement g = AmbiguityElement::identity(p);
  g.theta = kPi;
  const auto neg = act(g, pair, p);
  CHECK((neg.x + pair.x).norm() < 1e-14);
  CHECK((neg.w + pair.w).norm() < 1e-14);
}

TEST_CASE("lambda scaling with alpha = 1 preserves sections") {
  Rng rng(2);
  const auto p = make_params(9, 4, 2);
  REQUIRE(p.alpha == 1);
  const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
  AmbiguityElement g = AmbiguityElement::identity(p);
  g.lambda[0] = 2.0;
  const auto moved = act(g, pair, p);
  CHECK((moved.x - 2.0 * pair.x).norm() < 1e-14);
  CHECK((moved.w - 0.5 * pair.w).norm() < 1e-14);
  for (int r = 0; r < p.R; ++r)
    CHECK((section(p, moved, r).entries - section(p, pair, r).entries).norm() < 1e-14);
}

TEST_CASE("omega action uses floor on x and ceil on w") {
  const auto p = make_params(12, 7, 3);  // alpha 3, R 4
  SignalPair pair{cvec::Ones(12), cvec::Ones(7)};
  AmbiguityElement g = AmbiguityElement::identity(p);
  g.omega_index = 1;
  const complex om = std::polar(1.0, -kTwoPi / p.R);
  const auto moved = act(g, pair, p);
  for (int n = 0; n < 12; ++n) CHECK(std::abs(moved.x[n] - std::pow(om, n / 3)) < 1e-14);
  for (int n = 0; n < 7; ++n) CHECK(std::abs(moved.w[n] - std::pow(om, (n + 2) / 3)) < 1e-14);
}

TEST_CASE("magnitudes are invariant under random group elements") {
  Rng rng(3);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto p = random_params(rng);
    const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
    const auto g = AmbiguityElement::random(p, rng);
    worst = std::max(worst, verify_invariance(g, pair, p));
    // independent check through the direct-summation oracle
    const rmat a = oracle::direct_stft(p, pair).cwiseAbs();
    const rmat b = oracle::direct_stft(p, act(g, pair, p)).cwiseAbs();
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10 * a.maxCoeff());
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("non-group perturbation changes the magnitudes") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto p = make_params(12, 5, 2);
    const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
    SignalPair bad = pair;
    for (int n = 0; n < p.N; ++n) bad.x[n] *= (n % p.alpha == 0 ? 1.7 : 1.0);  // lambda on x only
    const rmat a = forward(p, pair).matrix().cwiseAbs();
    const rmat b = forward(p, bad).matrix().cwiseAbs();
    CHECK((a - b).cwiseAbs().maxCoeff() / a.maxCoeff() > 1e-3);
  }
}

TEST_CASE("group law") {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto p = random_params(rng);
    const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
    const auto g1 = AmbiguityElement::random(p, rng);
    const auto g2 = AmbiguityElement::random(p, rng);
    const auto lhs = act(g1, act(g2, pair, p), p);
    const auto rhs = act(compose(g1, g2, p), pair, p);
    CHECK(pair_distance(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("each group coordinate moves the pair but not the magnitudes") {
  Rng rng(6);
  const auto p = make_params(12, 6, 4);  // alpha 4
  const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
  std::vector<AmbiguityElement> directions;
  AmbiguityElement g = AmbiguityElement::identity(p);
  g.theta = 0.3;
  directions.push_back(g);
  for (int i = 0; i < p.alpha; ++i) {
    AmbiguityElement m = AmbiguityElement::identity(p);
    m.lambda[i] = 1.3;
    directions.push_back(m);
    m.lambda[i] = std::polar(1.0, 0.4);
    directions.push_back(m);
  }
  AmbiguityElement o = AmbiguityElement::identity(p);
  o.omega_index = 1;
  directions.push_back(o);
  for (const auto& d : directions) {
    CHECK(pair_distance(act(d, pair, p), pair) > 1e-3);
    CHECK(verify_invariance(d, pair, p) < 1e-12);
  }
}

TEST_CASE("known-window canonical form") {
  Rng rng(7);
  const auto p = make_params(10, 4, 2);
  const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
  const auto c = canonicalize(pair, p, Mode::KnownWindow);
  const complex pivot = c.pair.x[0] * c.pair.w[0];
  CHECK(std::abs(pivot.imag()) < 1e-14);
  CHECK(pivot.real() > 0.0);
  CHECK((c.pair.w - pair.w).norm() == 0.0);
  CHECK(pair_distance(canonicalize(c.pair, p, Mode::KnownWindow).pair, c.pair) < 1e-15);
}

TEST_CASE("blind canonical form is constant on orbits") {
  Rng rng(8);
  for (int t = 0; t < 40; ++t) {
    const auto p = make_params(12, 5, 1 + t % 6);
    if (p.W < p.alpha) continue;
    const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
    const auto c = canonicalize(pair, p, Mode::Blind);
    for (int n = 0; n < p.alpha; ++n) CHECK(std::abs(c.pair.w[n] - 1.0) < 1e-12);
    CHECK(std::abs(c.pair.x[0].imag()) < 1e-12);
    CHECK(c.pair.x[0].real() > 0.0);
    const auto g = AmbiguityElement::random(p, rng);
    const auto c2 = canonicalize(act(g, pair, p), p, Mode::Blind);
    CHECK(pair_distance(c2.pair, c.pair) < 1e-10);
    CHECK(pair_distance(canonicalize(c.pair, p, Mode::Blind).pair, c.pair) < 1e-12);
  }
}

TEST_CASE("canonicalize rejects zero pivots") {
  const auto p = make_params(8, 3, 2);
  Rng rng(9);
  auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
  pair.x[0] = 0.0;
  CHECK_THROWS_AS(canonicalize(pair, p, Mode::Blind), InvalidArgument);
  CHECK_THROWS_AS(canonicalize(pair, p, Mode::KnownWindow), InvalidArgument);
}

TEST_CASE("quotient error") {
  Rng rng(10);
  const auto p = make_params(11, 4, 3);
  const auto truth = random_pair(p, Distribution::ComplexGaussian, rng);
  CHECK(quotient_error(truth, truth, p, Mode::KnownWindow) == 0.0);
  const SignalPair rotated{std::polar(1.0, 2.0) * truth.x, truth.w};
  CHECK(quotient_error(rotated, truth, p, Mode::KnownWindow) < 1e-14);

  const auto real_truth = random_pair(p, Distribution::RealGaussian, rng);
  const SignalPair flipped{-real_truth.x, real_truth.w};
  CHECK(quotient_error(flipped, real_truth, p, Mode::KnownWindow) == 0.0);

  for (int t = 0; t < 20; ++t) {
    const auto g = AmbiguityElement::random(p, rng);
    CHECK(quotient_error(act(g, truth, p), truth, p, Mode::Blind) <= 1e-10);
  }
  const auto other = random_pair(p, Distribution::ComplexGaussian, rng);
  const double d1 = quotient_error(other, truth, p, Mode::Blind);
  CHECK(d1 > 1e-3);

  SignalPair zero = truth;
  zero.x.setZero();
  CHECK_THROWS_AS(quotient_error(truth, zero, p, Mode::KnownWindow), InvalidArgument);
}

TEST_CASE("quotient error is symmetric on equal-norm pairs") {
  Rng rng(11);
  const auto p = make_params(10, 3, 1);
  for (int t = 0; t < 10; ++t) {
    auto a = random_pair(p, Distribution::ComplexGaussian, rng);
    auto b = random_pair(p, Distribution::ComplexGaussian, rng);
    b.x *= a.x.norm() / b.x.norm();
    CHECK(std::abs(quotient_error(a, b, p, Mode::KnownWindow) - quotient_error(b, a, p, Mode::KnownWindow)) < 1e-12);
  }
}

TEST_CASE("ladder phase at a root of unity is a group element") {
  Rng rng(12);
  const auto p = make_params(12, 5, 2);  // alpha 2, R 6
  const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
  const auto moved = apply_ladder_phase(pair, p, kTwoPi * 2 / p.R);
  const rmat a = forward(p, pair).matrix().cwiseAbs();
  const rmat b = forward(p, moved).matrix().cwiseAbs();
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * a.maxCoeff());
  CHECK(quotient_error(moved, pair, p, Mode::Blind) < 1e-10);
  const auto shifted = apply_ladder_phase(pair, p, kTwoPi * 2 / p.R, -3);
  CHECK(pair_distance(shifted, moved) < 1e-12);
}

TEST_CASE("mode strings round trip") {
  CHECK(mode_from_string(to_string(Mode::KnownWindow)) == Mode::KnownWindow);
  CHECK(mode_from_string(to_string(Mode::Blind)) == Mode::Blind);
  CHECK_THROWS_AS(mode_from_string("partial"), InvalidArgument);
}
