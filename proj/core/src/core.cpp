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

#include "stftpr/core.hpp"

#include <cmath>
#include <numeric>

namespace stftpr {

ProblemParams make_params(int N, int W, int L) {
  if (N < 1 || W < 1 || L < 1) {
    throw InvalidArgument("N, W and L must be positive (got N=" + std::to_string(N) +
                          ", W=" + std::to_string(W) + ", L=" + std::to_string(L) + ")");
  }
  if (W > N) {
    throw InvalidArgument("window length W=" + std::to_string(W) +
                          " exceeds signal length N=" + std::to_string(N));
  }
  if (L > N) {
    throw InvalidArgument("step L=" + std::to_string(L) + " exceeds signal length N=" +
                          std::to_string(N));
  }
  ProblemParams p;
  p.N = N;
  p.W = W;
  p.L = L;
  p.alpha = std::gcd(L, N);
  p.R = N / p.alpha;
  return p;
}

namespace {

// Inverse of a modulo m for gcd(a, m) == 1, via extended Euclid.
long long mod_inverse(long long a, long long m) {
  if (m == 1) return 0;
  long long old_r = wrap(a, static_cast<int>(m)), r = m;
  long long old_s = 1, s = 0;
  while (r != 0) {
    const long long q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  return wrap(old_s, static_cast<int>(m));
}

}  // namespace

int shift_index(const ProblemParams& params, long long j) {
  // r * (L/alpha) == j (mod R) since alpha = gcd(L, N).
  const long long step = params.L / params.alpha;
  const long long inv = mod_inverse(step, params.R);
  return wrap(wrap(j, params.R) * inv, params.R);
}

std::string to_string(Distribution d) {
  return d == Distribution::ComplexGaussian ? "complex-gaussian" : "real-gaussian";
}

Distribution distribution_from_string(const std::string& name) {
  if (name == "complex-gaussian" || name == "complex") return Distribution::ComplexGaussian;
  if (name == "real-gaussian" || name == "real") return Distribution::RealGaussian;
  throw InvalidArgument("unknown distribution '" + name + "'");
}

std::uint64_t mix64(std::uint64_t v) noexcept {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::int64_t> coords) noexcept {
  std::uint64_t h = mix64(base);
  for (std::int64_t c : coords) h = mix64(h ^ mix64(static_cast<std::uint64_t>(c)));
  return h;
}

double Rng::normal(double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  return dist(engine_);
}

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

complex Rng::sample(Distribution d) {
  if (d == Distribution::RealGaussian) return {normal(1.0), 0.0};
  const double s = std::sqrt(0.5);
  const double re = normal(s);
  const double im = normal(s);
  return {re, im};
}

complex Rng::annulus(double lo, double hi) {
  const double radius = uniform(lo, hi);
  const double angle = uniform(0.0, kTwoPi);
  return std::polar(radius, angle);
}

cvec random_vector(int n, Distribution d, Rng& rng) {
  cvec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.sample(d);
  return v;
}

SignalPair random_pair(const ProblemParams& params, Distribution d, Rng& rng) {
  SignalPair pair;
  pair.x = random_vector(params.N, d, rng);
  pair.w = random_vector(params.W, d, rng);
  return pair;
}

complex optimal_phase(const cvec& a, const cvec& b) {
  // argmin_u ||u a - b|| over |u| = 1 is the phase of <a, b>.
  const complex inner = a.dot(b);  // conj(a)^T b
  const double mag = std::abs(inner);
  return mag > 0.0 ? inner / mag : complex(1.0, 0.0);
}

double phase_aligned_distance(const cvec& a, const cvec& b) {
  return (optimal_phase(a, b) * a - b).norm();
}

double relative_phase_distance(const cvec& a, const cvec& b) {
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return phase_aligned_distance(a, b) / scale;
}

bool is_real(const cvec& v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i].imag()) > tol) return false;
  }
  return true;
}

}  // namespace stftpr
