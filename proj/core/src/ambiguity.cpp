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

#include "stftpr/ambiguity.hpp"

#include <cmath>
#include <limits>

#include "stftpr/stft.hpp"

namespace stftpr {

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

// omega^p for omega = exp(-2 pi i k / R), reducing k p modulo R first.
complex root_power(int k, long long p, int R) {
  return std::polar(1.0, -kTwoPi * static_cast<double>(wrap(static_cast<long long>(k) * wrap(p, R), R)) / R);
}

void check_shapes(const SignalPair& pair, const ProblemParams& params) {
  if (pair.x.size() != params.N || pair.w.size() != params.W) {
    throw InvalidArgument("signal/window sizes do not match params");
  }
}

// -1, 0, +1 comparing a and b lexicographically over (Re, Im) of each entry,
// treating differences below tol as ties.
int lex_compare(const cvec& a, const cvec& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (double d : {a[i].real() - b[i].real(), a[i].imag() - b[i].imag()}) {
      if (d < -tol) return -1;
      if (d > tol) return 1;
    }
  }
  return 0;
}

double joint_relative_error(const SignalPair& est, const SignalPair& truth) {
  const double denom = std::sqrt(truth.x.squaredNorm() + truth.w.squaredNorm());
  const double num = std::sqrt((est.x - truth.x).squaredNorm() + (est.w - truth.w).squaredNorm());
  return num / denom;
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::KnownWindow ? "known" : "blind"; }

Mode mode_from_string(const std::string& name) {
  if (name == "known" || name == "known-window") return Mode::KnownWindow;
  if (name == "blind") return Mode::Blind;
  throw InvalidArgument("unknown mode '" + name + "'");
}

AmbiguityElement AmbiguityElement::identity(const ProblemParams& params) {
  AmbiguityElement g;
  g.lambda = cvec::Ones(params.alpha);
  return g;
}

AmbiguityElement AmbiguityElement::random(const ProblemParams& params, Rng& rng) {
  AmbiguityElement g;
  g.theta = rng.uniform(0.0, kTwoPi);
  g.lambda.resize(params.alpha);
  for (int i = 0; i < params.alpha; ++i) g.lambda[i] = rng.annulus(0.5, 2.0);
  std::uniform_int_distribution<int> pick(0, params.R - 1);
  g.omega_index = pick(rng.engine());
  return g;
}

AmbiguityElement compose(const AmbiguityElement& a, const AmbiguityElement& b, const ProblemParams& params) {
  if (a.lambda.size() != params.alpha || b.lambda.size() != params.alpha) {
    throw InvalidArgument("lambda length must equal alpha");
  }
  AmbiguityElement g;
  g.theta = std::fmod(a.theta + b.theta, kTwoPi);
  g.lambda = a.lambda.cwiseProduct(b.lambda);
  g.omega_index = wrap(static_cast<long long>(a.omega_index) + b.omega_index, params.R);
  return g;
}

SignalPair act(const AmbiguityElement& g, const SignalPair& pair, const ProblemParams& params) {
  check_shapes(pair, params);
  if (g.lambda.size() != params.alpha) throw InvalidArgument("lambda length must equal alpha");
  for (Eigen::Index i = 0; i < g.lambda.size(); ++i) {
    if (g.lambda[i] == complex(0.0)) throw InvalidArgument("lambda entries must be nonzero");
  }
  const int a = params.alpha;
  const int k = wrap(g.omega_index, params.R);
  const complex phase = std::polar(1.0, g.theta);
  SignalPair out = pair;
  for (int n = 0; n < params.N; ++n) {
    out.x[n] *= phase * g.lambda[n % a] * root_power(k, floor_div(n, a), params.R);
  }
  for (int n = 0; n < params.W; ++n) {
    out.w[n] *= phase / g.lambda[wrap(-n, a)] * root_power(k, ceil_div(n, a), params.R);
  }
  return out;
}

double verify_invariance(const AmbiguityElement& g, const SignalPair& pair, const ProblemParams& params) {
  const rmat before = forward(params, pair).matrix().cwiseAbs();
  const rmat after = forward(params, act(g, pair, params)).matrix().cwiseAbs();
  const double dev = (after - before).cwiseAbs().maxCoeff();
  const double scale = before.maxCoeff();
  return scale > 0.0 ? dev / scale : dev;
}

SignalPair apply_ladder_phase(const SignalPair& pair, const ProblemParams& params, double angle,
                              long long window_start) {
  check_shapes(pair, params);
  const int a = params.alpha;
  SignalPair out = pair;
  for (long long k = window_start; k < window_start + params.N; ++k) {
    out.x[wrap(k, params.N)] *= std::polar(1.0, static_cast<double>(ceil_div(k, a)) * angle);
  }
  for (int n = 0; n < params.W; ++n) {
    out.w[n] *= std::polar(1.0, static_cast<double>(floor_div(n, a)) * angle);
  }
  return out;
}

CanonicalForm canonicalize(const SignalPair& pair, const ProblemParams& params, Mode mode) {
  check_shapes(pair, params);
  CanonicalForm form;
  form.pair = pair;
  if (mode == Mode::KnownWindow) {
    const complex p = pair.x[0] * pair.w[0];
    if (p == complex(0.0)) throw InvalidArgument("x[0] w[0] is zero; phase cannot be fixed");
    form.pair.x *= std::conj(p) / std::abs(p);
    return form;
  }

  const int a = params.alpha;
  if (params.W < a) throw InvalidArgument("blind canonical form needs W >= alpha");
  AmbiguityElement g = AmbiguityElement::identity(params);
  for (int n = 0; n < a; ++n) {
    if (pair.w[n] == complex(0.0)) throw InvalidArgument("window pivot w[n], n < alpha, is zero");
    g.lambda[wrap(-n, a)] = pair.w[n];
  }
  SignalPair normalized = act(g, pair, params);
  if (normalized.x[0] == complex(0.0)) throw InvalidArgument("x[0] is zero; phase cannot be fixed");
  normalized.x *= std::conj(normalized.x[0]) / std::abs(normalized.x[0]);
  for (int n = 0; n < a; ++n) normalized.w[n] = 1.0;
  normalized.x[0] = std::abs(normalized.x[0]);

  const double tol = 1e-9 * std::max(normalized.x.cwiseAbs().maxCoeff(), 1e-300);
  form.pair = normalized;
  for (int k = 1; k < params.R; ++k) {
    SignalPair candidate = apply_ladder_phase(normalized, params, kTwoPi * k / params.R);
    if (lex_compare(candidate.x, form.pair.x, tol) < 0) {
      form.pair = std::move(candidate);
      form.residual_index = k;
    }
  }
  return form;
}

double quotient_error(const SignalPair& estimate, const SignalPair& truth, const ProblemParams& params,
                      Mode mode) {
  if (mode == Mode::KnownWindow) {
    if (estimate.x.size() != truth.x.size()) throw InvalidArgument("signal lengths differ");
    const double norm = truth.x.norm();
    if (norm == 0.0) throw InvalidArgument("truth has zero norm");
    if (is_real(estimate.x) && is_real(truth.x)) {
      return std::min((estimate.x - truth.x).norm(), (estimate.x + truth.x).norm()) / norm;
    }
    return phase_aligned_distance(estimate.x, truth.x) / norm;
  }
  check_shapes(estimate, params);
  check_shapes(truth, params);
  if (truth.x.norm() == 0.0) throw InvalidArgument("truth has zero norm");
  const SignalPair est = canonicalize(estimate, params, Mode::Blind).pair;
  const SignalPair ref = canonicalize(truth, params, Mode::Blind).pair;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < params.R; ++k) {
    best = std::min(best, joint_relative_error(apply_ladder_phase(est, params, kTwoPi * k / params.R), ref));
  }
  return best;
}

}  // namespace stftpr
