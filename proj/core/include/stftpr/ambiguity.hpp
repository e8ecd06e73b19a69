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

#ifndef STFTPR_AMBIGUITY_HPP
#define STFTPR_AMBIGUITY_HPP

#include "stftpr/core.hpp"

namespace stftpr {

// Trivial ambiguities of phaseless STFT measurements. With a known window only
// a global phase is lost; with a blind window the group is
//
//   G = S^1 x (C*)^alpha x Z_R
//
// acting on (x, w) by
//   theta:  (e^{i theta} x, e^{i theta} w)
//   lambda: x[n] *= lambda[n mod alpha],   w[n] /= lambda[-n mod alpha]
//   omega:  x[n] *= omega^floor(n / alpha), w[n] *= omega^ceil(n / alpha)
// with omega = exp(-2 pi i k / R).

enum class Mode { KnownWindow, Blind };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct AmbiguityElement {
  double theta = 0.0;
  cvec lambda;          // length alpha, entries nonzero
  int omega_index = 0;  // k in [0, R)

  static AmbiguityElement identity(const ProblemParams& params);
  static AmbiguityElement random(const ProblemParams& params, Rng& rng);
};

/// Group product: act(compose(a, b)) == act(a) after act(b).
AmbiguityElement compose(const AmbiguityElement& a, const AmbiguityElement& b, const ProblemParams& params);

SignalPair act(const AmbiguityElement& g, const SignalPair& pair, const ProblemParams& params);

/// max_{m,r} | |Y(g.pair)| - |Y(pair)| | / max |Y(pair)|.
double verify_invariance(const AmbiguityElement& g, const SignalPair& pair, const ProblemParams& params);

/// Continuous "ladder" phase
///
///   x[k] *= exp(i ceil(k / alpha) angle),  w[n] *= exp(i floor(n / alpha) angle),
///
/// with k running over the N consecutive indices starting at window_start.
/// It keeps w[0 .. alpha-1] and x[0] fixed. For angle = 2 pi k / R it is an
/// element of G (independent of window_start); for other angles it preserves
/// only the sections that do not straddle the end of the index window.
SignalPair apply_ladder_phase(const SignalPair& pair, const ProblemParams& params, double angle,
                              long long window_start = 0);

struct CanonicalForm {
  SignalPair pair;
  /// Blind mode: k such that ladder angle 2 pi k / R maps the normalized pair
  /// to the selected representative. Always 0 in known-window mode.
  int residual_index = 0;
};

/// Known-window: x scaled by the unit phase making x[0] w[0] real positive.
/// Blind: w[0 .. alpha-1] = 1 and x[0] > 0, then the Z_R representative whose x
/// is lexicographically smallest in (Re, Im).
CanonicalForm canonicalize(const SignalPair& pair, const ProblemParams& params, Mode mode);

/// Known-window: min over unit phases (or over +-1 when both signals are
/// real) of ||c x_est - x|| / ||x||. Blind: min over the residual Z_R elements
/// of the joint relative error of the canonical forms.
double quotient_error(const SignalPair& estimate, const SignalPair& truth, const ProblemParams& params,
                      Mode mode);

}  // namespace stftpr

#endif  // STFTPR_AMBIGUITY_HPP
