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

#include "stftpr/rrr.hpp"

#include <cmath>
#include <limits>

#include "stftpr/ambiguity.hpp"

namespace stftpr {

cmat project_range(const StftOperator& op, const cmat& z) { return op.apply(op.pseudo_inverse(z)); }

cmat project_magnitudes(const cmat& z, const MeasurementSet& measured) {
  if (measured.indices.size() != measured.magnitudes.size()) {
    throw InvalidArgument("measurement indices and magnitudes are not aligned");
  }
  cmat out = z;
  for (std::size_t k = 0; k < measured.size(); ++k) {
    const auto [m, r] = measured.indices[k];
    const complex v = z(m, r);
    const double mag = std::abs(v);
    out(m, r) = (mag > 0.0 ? v / mag : complex(1.0)) * measured.magnitudes[k];
  }
  return out;
}

cvec recover_signal(const ProblemParams& params, const cvec& w, const cmat& z) {
  return StftOperator(params, w).pseudo_inverse(z);
}

RrrOutcome rrr_solve(const ProblemParams& params, const cvec& w, const MeasurementSet& measured,
                     const RrrConfig& config, Rng& rng, const std::optional<cmat>& start,
                     const std::optional<cvec>& truth) {
  if (!(config.beta > 0.0 && config.beta <= 1.0)) throw InvalidArgument("beta must lie in (0, 1]");
  if (!(config.tol > 0.0) || !(config.success_tol > 0.0)) throw InvalidArgument("tolerances must be positive");
  if (config.max_iter < 0) throw InvalidArgument("max_iter must be nonnegative");
  validate(measured, params);
  const StftOperator op(params, w);
  if (!op.covers_signal()) {
    throw InvalidArgument("window does not cover every signal residue; the range projector is undefined");
  }

  cmat y;
  if (start) {
    if (start->rows() != params.N || start->cols() != params.R) throw InvalidArgument("start must be N x R");
    y = *start;
  } else {
    y.resize(params.N, params.R);
    for (Eigen::Index r = 0; r < y.cols(); ++r)
      for (Eigen::Index m = 0; m < y.rows(); ++m) y(m, r) = rng.sample(Distribution::ComplexGaussian);
  }

  RrrOutcome out;
  while (out.iterations < config.max_iter) {
    const cmat p2 = project_magnitudes(y, measured);
    const cmat step = config.beta * (project_range(op, 2.0 * p2 - y) - p2);
    const double ynorm = y.norm();
    out.final_step_ratio = ynorm > 0.0 ? step.norm() / ynorm : step.norm();
    y += step;
    ++out.iterations;
    if (!std::isfinite(out.final_step_ratio)) break;
    if (out.final_step_ratio < config.tol) {
      out.converged = true;
      break;
    }
  }
  out.x_hat = op.pseudo_inverse(y);

  if (truth) {
    const SignalPair est{out.x_hat, w};
    const SignalPair ref{*truth, w};
    out.error = out.x_hat.allFinite() ? quotient_error(est, ref, params, Mode::KnownWindow)
                                      : std::numeric_limits<double>::infinity();
    out.success = *out.error < config.success_tol;
  }
  return out;
}

}  // namespace stftpr
