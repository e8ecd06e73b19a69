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

#ifndef STFTPR_RRR_HPP
#define STFTPR_RRR_HPP

#include <optional>

#include "stftpr/core.hpp"
#include "stftpr/stft.hpp"

namespace stftpr {

// Relaxed-reflect-reflect iteration in the space of full N x R STFT tables:
//
//   y <- y + beta (P1(2 P2(y) - y) - P2(y)),
//
// with P1 = A A^+ the projector onto the range of the STFT operator and P2
// the projector onto tables whose measured entries have the measured
// magnitudes.

struct RrrConfig {
  double beta = 0.5;
  double tol = 1e-8;
  int max_iter = 10000;
  double success_tol = 1e-4;
};

struct RrrOutcome {
  cvec x_hat;
  int iterations = 0;
  bool converged = false;
  double final_step_ratio = 0.0;
  /// Set when a ground truth was supplied.
  std::optional<double> error;
  std::optional<bool> success;
};

/// A A^+ z. Throws InvalidArgument when the window misses a signal residue.
cmat project_range(const StftOperator& op, const cmat& z);

/// Measured entries rescaled to the measured magnitude (phase kept, phase 1
/// at zero); other entries untouched.
cmat project_magnitudes(const cmat& z, const MeasurementSet& measured);

/// A^+ z.
cvec recover_signal(const ProblemParams& params, const cvec& w, const cmat& z);

/// Runs RRR from `start` (N x R) or, when absent, from an i.i.d. complex
/// Gaussian table drawn from rng. `truth` enables the success test, which
/// uses the phase-quotient relative error (sign quotient for real estimates).
RrrOutcome rrr_solve(const ProblemParams& params, const cvec& w, const MeasurementSet& measured,
                     const RrrConfig& config, Rng& rng, const std::optional<cmat>& start = std::nullopt,
                     const std::optional<cvec>& truth = std::nullopt);

}  // namespace stftpr

#endif  // STFTPR_RRR_HPP
