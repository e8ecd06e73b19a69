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

#ifndef STFTPR_INTENSITY_HPP
#define STFTPR_INTENSITY_HPP

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "stftpr/core.hpp"

namespace stftpr {

// Fourier intensity of a short vector y in C^W:
//
//   y^(omega) = y[0] + y[1] omega + ... + y[W-1] omega^(W-1),
//   A_y(omega) = |y^(omega)|^2 = sum_{k=-(W-1)}^{W-1} a_k omega^k   on |omega| = 1,
//
// with a_k = sum_n y[n+k] conj(y[n]) and a_{-k} = conj(a_k). Vectors sharing
// A_y differ by a global phase and by flipping roots beta -> 1/conj(beta).

class IntensityProfile {
 public:
  IntensityProfile() = default;
  /// `nonnegative` holds a_0, a_1, ..., a_{W-1}; a_0 must be real.
  explicit IntensityProfile(cvec nonnegative);

  int window_length() const noexcept { return static_cast<int>(coeffs_.size()); }
  /// a_k for k in [-(W-1), W-1].
  complex coefficient(int k) const;
  const cvec& nonnegative_coefficients() const noexcept { return coeffs_; }
  /// sum_k a_k omega^k. Real on the unit circle; the real part is returned.
  double evaluate(complex omega) const;

 private:
  cvec coeffs_;
};

struct IntensitySample {
  complex point;  // on the unit circle
  double value;   // A(point)
};

struct RootProfile {
  complex leading;
  complex trailing;
  std::vector<complex> roots;

  /// Coefficients of leading * prod(omega - beta_i), lowest degree first.
  cvec reconstruct() const;
};

struct FlipCandidateSet {
  /// One vector per subset I of the roots (bit i of the index flips root i);
  /// index 0 reproduces the source vector exactly.
  std::vector<cvec> candidates;
};

inline constexpr int kDefaultFlipCap = 12;

IntensityProfile profile_of(const cvec& y);

/// Recovers the 2W-1 real parameters of A from samples at distinct
/// unit-circle points by least squares. Throws InvalidArgument for fewer than
/// 2W-1 distinct points and IllConditioned when cond > 1e8.
IntensityProfile profile_from_samples(std::span<const IntensitySample> samples, int W);

/// Roots of y^ via companion-matrix eigenvalues, polished by Newton steps.
RootProfile roots_of(const cvec& y);

/// Coefficients (lowest degree first) of leading * prod(omega - roots[i]).
cvec poly_from_roots(complex leading, std::span<const complex> roots);

/// 1 / conj(z).
complex flip(complex root);

FlipCandidateSet enumerate_flips(const cvec& y, int max_window = kDefaultFlipCap);

/// Greedy deduplication modulo global phase; two vectors are the same class
/// when their relative phase-aligned distance is at most rel_tol.
std::vector<cvec> distinct_up_to_phase(const std::vector<cvec>& vectors, double rel_tol);

/// Spectral factorisation: some vector whose intensity is `profile`, built
/// from the roots of omega^(W-1) A(omega) lying inside (or on) the circle.
cvec factor_profile(const IntensityProfile& profile);

struct KnownEntryOptions {
  double residual_tol = 1e-8;   // relative to the largest sample value
  int multistarts = 16;
  double separation_tol = 1e-6; // relative distance separating two solutions
  std::uint64_t seed = 0x5eedULL;
};

/// Number of intensity samples needed to complete a vector whose unknown
/// entries sit at `unknown`: 2|S-S| - 1 + 2|S|, with |S-S| counting the
/// distinct nonnegative differences (so |S-S| = |S| for contiguous S).
int required_samples(std::span<const int> unknown);

/// Completes a vector from its known entries and intensity samples.
///
/// The intensity is affine in the unknown entries u and in their
/// autocorrelation, so the lifted system in (u, autocorr(u)) is solved
/// linearly first; when that system is rank deficient a Levenberg-Marquardt
/// multistart takes over. Every returned vector reproduces all samples to
/// `residual_tol`. Throws NonGenericInstance when no completion fits and
/// AmbiguousSolution when two separated completions fit.
cvec recover_with_known_entries(std::span<const IntensitySample> samples,
                                const std::map<int, complex>& known,
                                std::span<const int> unknown,
                                const KnownEntryOptions& options = {});

enum class AppendixKind { AFirst, ASecond, BTriple, BAllOnes };

std::string to_string(AppendixKind kind);

/// Test vectors used by the uniqueness arguments.
///  AFirst:  (z0, za) with z0 all ones and za[j + alpha] = w[j + alpha] / w[j],
///           generic leading entries za[0 .. alpha-1].
///  ASecond: (z0, za) with za all ones, z0[j] = w[j] / w[j + alpha] for
///           j <= W-1-alpha and generic tail.
///  BTriple: (z0, za, zm) sparse 1 / 4 / (1/4, 1) construction.
///  BAllOnes:(z0, za, zm) with z0 = zm = ones and za = (c, 1, ..., 1), c = W.
/// Generic entries are drawn on the annulus 0.5 <= |z| <= 2.
std::vector<cvec> appendix_test_vectors(AppendixKind kind, int W, int alpha,
                                        const std::optional<cvec>& w, Rng& rng);

}  // namespace stftpr

#endif  // STFTPR_INTENSITY_HPP
