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

#ifndef STFTPR_STFT_HPP
#define STFTPR_STFT_HPP

#include <compare>
#include <span>
#include <vector>

#include "stftpr/core.hpp"

namespace stftpr {

// Periodic STFT
//
//   Y[m, r] = sum_n x[n] w[rL - n] exp(-2 pi i n m / N),   0 <= m < N, 0 <= r < R,
//
// with w zero beyond W and all indices taken modulo N. Column r of the table
// is the N-point DFT of x times the window placed at shift rL.
//
// Substituting n = rL - k shows |Y[m, r]| = |sum_k y_r[k] exp(+2 pi i k m / N)|
// where y_r[k] = x[rL - k] w[k] is the section vector, i.e. row m samples the
// Fourier intensity of y_r at the point exp(+2 pi i m / N) (frequency_point).

/// exp(+2 pi i m / N): the unit-circle point at which |Y[m, r]|^2 samples the
/// intensity of section r.
complex frequency_point(int m, int N);

class StftTable {
 public:
  StftTable() = default;
  explicit StftTable(cmat values) : values_(std::move(values)) {}

  int N() const noexcept { return static_cast<int>(values_.rows()); }
  int R() const noexcept { return static_cast<int>(values_.cols()); }
  complex operator()(int m, int r) const { return values_(m, r); }
  /// N x R matrix; the flattened measurement vector uses index m + N * r.
  const cmat& matrix() const noexcept { return values_; }

 private:
  cmat values_;
};

struct SectionVector {
  cvec entries;  // entries[n] = x[rL - n] w[n]
  int shift = 0; // rL mod N
};

struct MeasurementIndex {
  int m = 0;
  int r = 0;

  friend auto operator<=>(const MeasurementIndex&, const MeasurementIndex&) = default;
};

struct MeasurementSet {
  std::vector<MeasurementIndex> indices;
  std::vector<double> magnitudes;

  std::size_t size() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }
};

/// Checks the MeasurementSet invariants (aligned sizes, no duplicates,
/// nonnegative finite magnitudes, indices inside the N x R grid).
void validate(const MeasurementSet& set, const ProblemParams& params);

/// Functional form of the STFT operator A for a fixed window. Keeps the DFT
/// matrix and the N x R window placement so A, A^H and A^+ are two small
/// matrix products each.
class StftOperator {
 public:
  StftOperator(const ProblemParams& params, const cvec& w);

  const ProblemParams& params() const noexcept { return params_; }

  /// A x as an N x R table.
  cmat apply(const cvec& x) const;
  /// A^H z.
  cvec adjoint(const cmat& z) const;
  /// Least-squares inverse A^+ z = (A^H A)^{-1} A^H z using the diagonal
  /// frame operator. Throws InvalidArgument if the window misses a residue.
  cvec pseudo_inverse(const cmat& z) const;

  /// Diagonal of A^H A: N * sum_r |w[rL - n]|^2.
  const rvec& frame_diagonal() const noexcept { return frame_; }
  bool covers_signal() const noexcept;

 private:
  ProblemParams params_;
  cmat dft_;       // F(m, n) = exp(-2 pi i m n / N)
  cmat placement_; // P(n, r) = w[(rL - n) mod N]
  rvec frame_;
};

StftTable forward(const ProblemParams& params, const SignalPair& pair);

SectionVector section(const ProblemParams& params, const SignalPair& pair, int r);

MeasurementSet magnitudes(const StftTable& table, std::span<const MeasurementIndex> indices);

/// Dense (N R) x N matrix with row m + N r, column n equal to
/// w[rL - n] exp(-2 pi i n m / N). Refuses to materialise more than 2^16 rows.
cmat operator_matrix(const ProblemParams& params, const cvec& w);

std::vector<MeasurementIndex> full_grid(const ProblemParams& params);

/// Uniform sample of `count` distinct grid entries.
std::vector<MeasurementIndex> random_mask(const ProblemParams& params, int count, Rng& rng);

}  // namespace stftpr

#endif  // STFTPR_STFT_HPP
