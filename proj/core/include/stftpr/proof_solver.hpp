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

#ifndef STFTPR_PROOF_SOLVER_HPP
#define STFTPR_PROOF_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "stftpr/core.hpp"
#include "stftpr/intensity.hpp"
#include "stftpr/stft.hpp"

namespace stftpr {

// Constructive recovery from the bound-sized measurement sets.
//
// Known window: the sections at shifts 0 and alpha are spectrally factored,
// every flip pair is tested against
//
//   w[j + alpha] y_0[j] = w[j] y_alpha[j + alpha],   j = 0 .. W-1-alpha,
//
// and the surviving pair fixes x on [-W+1, alpha]. Each later section at
// shift j alpha then has only alpha unknown entries, completed from 4 alpha - 1
// intensity samples.
//
// Blind window: the sections at shifts 0, alpha and -alpha are factored and
// flip triples are tested against
//
//   y_{-alpha}[l] y_alpha[l + alpha] = y_0[l] y_0[l + alpha],   l = 0 .. W-1-alpha.
//
// With w[0 .. alpha-1] = 1 and x[0] > 0 the triple determines w and x on
// [-(W-1+alpha), alpha] up to a continuous ladder phase, the recursion extends
// x to the end of the index window and the seam measurements quantize the
// ladder phase to an R-th root of unity.

enum class RecoveryStatus { Unique, Ambiguous, Failed };

std::string to_string(RecoveryStatus status);

struct RecoveryResult {
  SignalPair estimate;
  RecoveryStatus status = RecoveryStatus::Failed;
  double relation_residual = 0.0;    // best relation fit among surviving candidates
  double consistency_residual = 0.0; // max | |Y(estimate)| - input | / max input
  int steps_used = 0;                // Step 1 plus recursion blocks processed
  int measurements_used = 0;
  int candidate_classes = 0;         // relation-consistent classes after Step 1
  std::string message;
};

struct ProofSolverOptions {
  double relation_tol = 1e-6;
  double separation_tol = 1e-4;
  double pivot_tol = 1e-10;
  double consistency_tol = 1e-6;
  /// Blind mode: use the seam measurements when they are present.
  bool use_seam = true;
  /// Levenberg-Marquardt sweeps over all used measurements after the
  /// recursion. 0 disables.
  int polish_iterations = 50;
  /// Per-block settings for the recursion.
  KnownEntryOptions entry_options{.residual_tol = 1e-4};
};

inline constexpr int kKnownWindowCap = 12;
inline constexpr int kBlindWindowCap = 10;

/// Requires W >= 2, N >= 2W-1, N >= 4 alpha - 1, alpha < W, W <= 12, all w
/// entries nonzero and every index of known_window_measurement_set present.
RecoveryResult recover_known_window(const MeasurementSet& measurements, const cvec& w,
                                    const ProblemParams& params, const ProofSolverOptions& options = {});

/// Requires W >= 2, N >= 2W-1, N >= 4 alpha - 1, alpha < W, N >= W + 2 alpha,
/// W <= 10 and every index of blind_measurement_set present. Without the seam
/// indices (blind_seam_plan) the status is Ambiguous. The estimate is returned
/// in blind canonical form.
RecoveryResult recover_blind(const MeasurementSet& measurements, const ProblemParams& params,
                             const ProofSolverOptions& options = {});

struct KnownPairClass {
  cvec y0;
  cvec ya;
  double residual = 0.0;
};

/// Flip pairs (c0, u ca), |u| = 1, satisfying the linear relations to
/// relation_tol, merged modulo a global phase at separation_tol.
std::vector<KnownPairClass> consistent_known_pairs(const std::vector<cvec>& c0s, const std::vector<cvec>& cas,
                                                   const cvec& w, int alpha, double relation_tol,
                                                   double separation_tol);

struct BlindTripleClass {
  cvec z0;
  cvec za;
  cvec zm;
  double residual = 0.0;
};

/// Flip triples satisfying the quadratic relations up to one phase, merged
/// modulo (z0, za, zm) -> (e^{ia} z0, e^{i(a+b)} za, e^{i(a-b)} zm).
std::vector<BlindTripleClass> consistent_blind_triples(const std::vector<cvec>& c0s, const std::vector<cvec>& cas,
                                                       const std::vector<cvec>& cms, int alpha,
                                                       double relation_tol, double separation_tol);

struct PropositionReport {
  int trials = 0;
  int unique = 0;
  double fraction = 0.0;
  int max_classes = 0;
  bool fixed_cases_pass = true;
  std::vector<std::string> notes;
};

/// Brute-force uniqueness check over all flip pairs of random
/// relation-consistent (y_0, y_alpha), plus the two fixed pair constructions.
/// Requires 2 <= W <= 10 and 1 <= alpha < W.
PropositionReport verify_proposition_A(int W, int alpha, const std::optional<cvec>& w, int trials, Rng& rng);

/// Brute-force uniqueness check over all flip triples of random section
/// triples, plus the fixed sparse and all-ones constructions with their
/// root-location properties. Requires 3 <= W <= 8 and 1 <= alpha < W.
PropositionReport verify_proposition_B(int W, int alpha, int trials, Rng& rng);

}  // namespace stftpr

#endif  // STFTPR_PROOF_SOLVER_HPP
