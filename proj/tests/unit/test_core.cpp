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

#include <numeric>
#include <set>

#include "doctest.h"
#include "stftpr/core.hpp"

using namespace stftpr;

TEST_CASE("make_params derives alpha and R") {
  const auto a = make_params(11, 3, 4);
  CHECK(a.alpha == 1);
  CHECK(a.R == 11);
  const auto b = make_params(100, 10, 4);
  CHECK(b.alpha == 4);
  CHECK(b.R == 25);
  const auto c = make_params(8, 2, 8);
  CHECK(c.alpha == 8);
  CHECK(c.R == 1);
}

TEST_CASE("make_params rejects bad shapes") {
  CHECK_THROWS_AS(make_params(5, 6, 1), InvalidArgument);
  CHECK_THROWS_AS(make_params(5, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(make_params(0, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(make_params(5, 2, 6), InvalidArgument);
  CHECK_THROWS_AS(make_params(5, 2, -1), InvalidArgument);
}

TEST_CASE("alpha divides L and N over a grid") {
  for (int N = 1; N <= 40; ++N)
    for (int L = 1; L <= N; ++L) {
      const auto p = make_params(N, 1, L);
      CHECK(L % p.alpha == 0);
      CHECK(N % p.alpha == 0);
      CHECK(p.R * p.alpha == N);
    }
}

TEST_CASE("shift_index examples") {
  CHECK(shift_index(make_params(11, 3, 4), 1) == 3);
  CHECK(shift_index(make_params(11, 3, 4), 0) == 0);
  CHECK(shift_index(make_params(100, 10, 4), 1) == 1);
}

TEST_CASE("shift_index solves r L = j alpha against brute force") {
  for (int N = 2; N <= 36; ++N)
    for (int L = 1; L <= N; ++L) {
      const auto p = make_params(N, 1, L);
      std::set<int> shifts;
      std::set<int> rs;
      for (long long j = -3; j < p.R + 3; ++j) {
        const int r = shift_index(p, j);
        REQUIRE(r >= 0);
        REQUIRE(r < p.R);
        // brute force: the unique r in [0, R) with r L = j alpha mod N
        int hits = 0;
        for (int s = 0; s < p.R; ++s)
          if (wrap(1LL * s * L - j * p.alpha, N) == 0) {
            ++hits;
            CHECK(s == r);
          }
        CHECK(hits == 1);
        if (j >= 0 && j < p.R) {
          rs.insert(r);
          shifts.insert(wrap(1LL * r * L, N));
        }
      }
      CHECK(static_cast<int>(rs.size()) == p.R);
      for (int k = 0; k < p.R; ++k) CHECK(shifts.count(k * p.alpha) == 1);
    }
}

TEST_CASE("wrap handles negative and large indices") {
  CHECK(wrap(-1, 7) == 6);
  CHECK(wrap(7, 7) == 0);
  CHECK(wrap(-15, 7) == 6);
  CHECK(wrap(23, 7) == 2);
}

TEST_CASE("random_pair is deterministic per seed") {
  const auto p = make_params(12, 4, 3);
  Rng a(42), b(42), c(43);
  const auto pa = random_pair(p, Distribution::ComplexGaussian, a);
  const auto pb = random_pair(p, Distribution::ComplexGaussian, b);
  const auto pc = random_pair(p, Distribution::ComplexGaussian, c);
  CHECK(pa.x == pb.x);
  CHECK(pa.w == pb.w);
  CHECK(pa.x != pc.x);
  CHECK(pa.x.size() == 12);
  CHECK(pa.w.size() == 4);
}

TEST_CASE("real Gaussian draws have no imaginary part") {
  Rng rng(3);
  const auto v = random_vector(50, Distribution::RealGaussian, rng);
  CHECK(v.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(is_real(v));
}

TEST_CASE("complex Gaussian has unit second moment") {
  Rng rng(9);
  double sum = 0.0;
  double re2 = 0.0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    const complex z = rng.sample(Distribution::ComplexGaussian);
    sum += std::norm(z);
    re2 += z.real() * z.real();
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.05));
  CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("derive_seed separates coordinates") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(2, {2, 3}));
  CHECK(derive_seed(1, {0}) != derive_seed(1, {0, 0}));
  Rng r(5);
  CHECK(r.split(1).seed() == Rng(5).split(1).seed());
  CHECK(r.split(1).seed() != r.split(2).seed());
}

TEST_CASE("annulus sampling stays in range") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double m = std::abs(rng.annulus(0.5, 2.0));
    CHECK(m >= 0.5);
    CHECK(m <= 2.0);
  }
}

TEST_CASE("optimal phase aligns rotated vectors") {
  Rng rng(11);
  const cvec a = random_vector(9, Distribution::ComplexGaussian, rng);
  const cvec b = std::polar(1.0, 0.7) * a;
  CHECK(phase_aligned_distance(b, a) < 1e-12);
  CHECK(relative_phase_distance(b, a) < 1e-12);
  const complex u = optimal_phase(b, a);
  CHECK(std::abs(std::abs(u) - 1.0) < 1e-12);
  const cvec c = random_vector(9, Distribution::ComplexGaussian, rng);
  CHECK(relative_phase_distance(c, a) > 1e-3);
}
