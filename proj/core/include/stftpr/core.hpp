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

#ifndef STFTPR_CORE_HPP
#define STFTPR_CORE_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace stftpr {

using complex = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Error hierarchy. Usage and precondition problems derive from
// InvalidArgument; numerical outcomes that a caller may want to branch on
// (non-generic inputs, ambiguity, conditioning) have their own types.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

class NonGenericInstance : public Error {
 public:
  using Error::Error;
};

class AmbiguousSolution : public Error {
 public:
  using Error::Error;
};

/// Measurement geometry: signal length N, window length W, step L, with
/// alpha = gcd(L, N) and R = N / alpha sections.
struct ProblemParams {
  int N = 0;
  int W = 0;
  int L = 0;
  int alpha = 0;
  int R = 0;

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

ProblemParams make_params(int N, int W, int L);

/// Signal x (length N, periodic) and window w (length W, implicitly
/// zero-padded to N).
struct SignalPair {
  cvec x;
  cvec w;
};

/// Reduces an arbitrary (possibly negative) index modulo n into [0, n).
constexpr int wrap(long long index, int n) noexcept {
  long long r = index % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

/// Returns r in [0, R) with r * L == j * alpha (mod N).
int shift_index(const ProblemParams& params, long long j);

enum class Distribution { ComplexGaussian, RealGaussian };

std::string to_string(Distribution d);
Distribution distribution_from_string(const std::string& name);

/// splitmix64 finalizer; used to derive independent per-cell seeds.
std::uint64_t mix64(std::uint64_t v) noexcept;
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::int64_t> coords) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::mt19937_64& engine() noexcept { return engine_; }

  double normal(double stddev = 1.0);
  double uniform(double lo = 0.0, double hi = 1.0);
  /// Complex Gaussian uses independent N(0, 1/2) parts so that E|z|^2 = 1.
  complex sample(Distribution d);
  /// Uniform on the annulus lo <= |z| <= hi (uniform radius, uniform angle).
  complex annulus(double lo, double hi);

  /// Independent child stream; same (seed, stream) gives the same child.
  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, {static_cast<std::int64_t>(stream)})); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

cvec random_vector(int n, Distribution d, Rng& rng);
SignalPair random_pair(const ProblemParams& params, Distribution d, Rng& rng);

/// Unit scalar u minimising ||u * a - b||.
complex optimal_phase(const cvec& a, const cvec& b);
/// min over theta of ||exp(i theta) a - b||.
double phase_aligned_distance(const cvec& a, const cvec& b);
/// Phase-aligned distance divided by max(||a||, ||b||); 0 when both vanish.
double relative_phase_distance(const cvec& a, const cvec& b);

bool is_real(const cvec& v, double tol = 0.0);

}  // namespace stftpr

#endif  // STFTPR_CORE_HPP
