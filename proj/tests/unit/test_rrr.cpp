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
#include "stftpr/rrr.hpp"
#include "stftpr/stft.hpp"

using namespace stftpr;

namespace {

cmat random_table(const ProblemParams& p, Rng& rng) {
  cmat z(p.N, p.R);
  for (int r = 0; r < p.R; ++r)
    for (int m = 0; m < p.N; ++m) z(m, r) = rng.sample(Distribution::ComplexGaussian);
  return z;
}

complex inner(const cmat& a, const cmat& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

}  // namespace

TEST_CASE("range projector is an orthogonal projector") {
  Rng rng(1);
  const auto p = make_params(11, 5, 2);
  const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
  const StftOperator op(p, pair.w);
  const cmat Ax = op.apply(pair.x);
  CHECK((project_range(op, Ax) - Ax).norm() < 1e-10 * Ax.norm());
  const cmat z = random_table(p, rng);
  const cmat pz = project_range(op, z);
  CHECK((project_range(op, pz) - pz).norm() < 1e-10 * z.norm());
  const cmat u = random_table(p, rng);
  CHECK(std::abs(inner(project_range(op, u), z) - inner(u, pz)) < 1e-10 * u.norm() * z.norm());
  const cmat orth = z - pz;
  CHECK(project_range(op, orth).norm() < 1e-10 * z.norm());
}

TEST_CASE("range projector matches the dense projector") {
  Rng rng(2);
  const auto p = make_params(8, 3, 2);
  const cvec w = random_vector(3, Distribution::ComplexGaussian, rng);
  const cmat A = oracle::direct_operator(p, w);
  const cmat P = A * A.completeOrthogonalDecomposition().pseudoInverse();
  const cmat z = random_table(p, rng);
  const cvec flat = Eigen::Map<const cvec>(z.data(), z.size());
  const cvec dense = P * flat;
  const cmat ours = project_range(StftOperator(p, w), z);
  CHECK((Eigen::Map<const cvec>(ours.data(), ours.size()) - dense).norm() < 1e-10 * flat.norm());
}

TEST_CASE("range projector needs coverage") {
  const auto p = make_params(8, 1, 2);  // residues 1, 3, 5, 7 never touched
  CHECK_THROWS_AS(StftOperator(p, cvec::Ones(1)).pseudo_inverse(cmat::Zero(8, 4)), InvalidArgument);
  Rng rng(1);
  const MeasurementSet empty;
  CHECK_THROWS_AS(rrr_solve(p, cvec::Ones(1), empty, RrrConfig{}, rng), InvalidArgument);
}

TEST_CASE("magnitude projector") {
  cmat z(2, 2);
  z << complex(3, 4), complex(0, 0), complex(-1, 0), complex(0, 2);
  MeasurementSet ms;
  ms.indices = {{0, 0}, {0, 1}};
  ms.magnitudes = {10.0, 3.0};
  const cmat out = project_magnitudes(z, ms);
  CHECK(std::abs(out(0, 0) - complex(6, 8)) < 1e-14);
  CHECK(out(0, 1) == complex(3.0));
  CHECK(out(1, 0) == z(1, 0));
  CHECK(out(1, 1) == z(1, 1));
  CHECK((project_magnitudes(z, MeasurementSet{}) - z).norm() == 0.0);
  const cmat again = project_magnitudes(out, ms);
  CHECK((again - out).norm() < 1e-14);
  MeasurementSet bad = ms;
  bad.magnitudes.pop_back();
  CHECK_THROWS_AS(project_magnitudes(z, bad), InvalidArgument);
}

TEST_CASE("recover_signal inverts the operator and solves least squares") {
  Rng rng(3);
  const auto p = make_params(9, 4, 3);
  const auto pair = random_pair(p, Distribution::ComplexGaussian, rng);
  const StftOperator op(p, pair.w);
  CHECK((recover_signal(p, pair.w, op.apply(pair.x)) - pair.x).norm() < 1e-10 * pair.x.norm());
  const cmat z = random_table(p, rng);
  const cmat e = z - project_range(op, z);
  CHECK((recover_signal(p, pair.w, op.apply(pair.x) + e) - pair.x).norm() < 1e-10 * pair.x.norm());
  const cvec flat = Eigen::Map<const cvec>(z.data(), z.size());
  const cvec dense = oracle::dense_least_squares(oracle::direct_operator(p, pair.w), flat);
  CHECK((recover_signal(p, pair.w, z) - dense).norm() < 1e-10 * dense.norm());
}

TEST_CASE("feasible start is a fixed point") {
  Rng rng(4);
  const auto p = make_params(11, 6, 2);
  const auto truth = random_pair(p, Distribution::RealGaussian, rng);
  const StftOperator op(p, truth.w);
  const cmat start = op.apply(truth.x);
  const auto ms = magnitudes(StftTable(start), full_grid(p));
  const auto out = rrr_solve(p, truth.w, ms, RrrConfig{}, rng, start, truth.x);
  CHECK(out.converged);
  CHECK(out.iterations <= 1);
  CHECK(out.final_step_ratio < 1e-9);
  CHECK(*out.success);
  CHECK(*out.error < 1e-10);
}

TEST_CASE("rrr recovers from many random magnitudes") {
  const auto p = make_params(11, 8, 3);
  int ok = 0;
  for (int t = 0; t < 10; ++t) {
    Rng rng(derive_seed(9, {t}));
    const auto truth = random_pair(p, Distribution::RealGaussian, rng);
    const auto ms = magnitudes(forward(p, truth), random_mask(p, 8 * p.N, rng));
    const auto out = rrr_solve(p, truth.w, ms, RrrConfig{}, rng, std::nullopt, truth.x);
    if (*out.success) ++ok;
  }
  CHECK(ok >= 8);
}

TEST_CASE("rrr is deterministic per seed") {
  const auto p = make_params(11, 5, 2);
  Rng g(1);
  const auto truth = random_pair(p, Distribution::RealGaussian, g);
  const auto ms = magnitudes(forward(p, truth), random_mask(p, 40, g));
  RrrConfig cfg;
  cfg.max_iter = 200;
  Rng a(77), b(77);
  const auto o1 = rrr_solve(p, truth.w, ms, cfg, a);
  const auto o2 = rrr_solve(p, truth.w, ms, cfg, b);
  CHECK(o1.iterations == o2.iterations);
  CHECK((o1.x_hat - o2.x_hat).norm() == 0.0);
  CHECK_FALSE(o1.error.has_value());
}

TEST_CASE("rrr rejects bad configurations") {
  const auto p = make_params(11, 5, 2);
  Rng rng(1);
  const auto truth = random_pair(p, Distribution::RealGaussian, rng);
  const auto ms = magnitudes(forward(p, truth), random_mask(p, 20, rng));
  RrrConfig cfg;
  cfg.beta = 0.0;
  CHECK_THROWS_AS(rrr_solve(p, truth.w, ms, cfg, rng), InvalidArgument);
  cfg = RrrConfig{};
  cfg.tol = -1.0;
  CHECK_THROWS_AS(rrr_solve(p, truth.w, ms, cfg, rng), InvalidArgument);
  cfg = RrrConfig{};
  cfg.max_iter = 0;
  const auto out = rrr_solve(p, truth.w, ms, cfg, rng);
  CHECK(out.iterations == 0);
  CHECK_FALSE(out.converged);
}
