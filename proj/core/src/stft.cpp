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

#include "stftpr/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace stftpr {

namespace {

constexpr long long kMaxMaterializedRows = 1LL << 16;

cmat dft_matrix(int n) {
  cmat f(n, n);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      // exponent reduced mod N before the product is formed
      f(m, k) = std::polar(1.0, -kTwoPi * static_cast<double>(wrap(1LL * m * k, n)) / n);
    }
  }
  return f;
}

void check_pair(const ProblemParams& params, const SignalPair& pair) {
  if (pair.x.size() != params.N || pair.w.size() != params.W) {
    throw InvalidArgument("signal/window sizes do not match params (N=" + std::to_string(params.N) +
                          ", W=" + std::to_string(params.W) + ")");
  }
}

}  // namespace

complex frequency_point(int m, int N) {
  return std::polar(1.0, kTwoPi * static_cast<double>(wrap(m, N)) / N);
}

void validate(const MeasurementSet& set, const ProblemParams& params) {
  if (set.indices.size() != set.magnitudes.size()) {
    throw InvalidArgument("measurement indices and magnitudes are not aligned");
  }
  std::set<MeasurementIndex> seen;
  for (std::size_t k = 0; k < set.indices.size(); ++k) {
    const auto& idx = set.indices[k];
    if (idx.m < 0 || idx.m >= params.N || idx.r < 0 || idx.r >= params.R) {
      throw InvalidArgument("measurement index (" + std::to_string(idx.m) + ", " +
                            std::to_string(idx.r) + ") outside the grid");
    }
    if (!seen.insert(idx).second) {
      throw InvalidArgument("duplicate measurement index (" + std::to_string(idx.m) + ", " +
                            std::to_string(idx.r) + ")");
    }
    const double v = set.magnitudes[k];
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("magnitudes must be finite and nonnegative");
  }
}

StftOperator::StftOperator(const ProblemParams& params, const cvec& w)
    : params_(params), dft_(dft_matrix(params.N)), placement_(cmat::Zero(params.N, params.R)),
      frame_(rvec::Zero(params.N)) {
  if (w.size() != params.W) throw InvalidArgument("window length does not match params.W");
  for (int r = 0; r < params.R; ++r) {
    const long long shift = 1LL * r * params.L;
    for (int k = 0; k < params.W; ++k) {
      // w[rL - n] is nonzero only for n = rL - k, k in [0, W).
      placement_(wrap(shift - k, params.N), r) = w[k];
    }
  }
  frame_ = static_cast<double>(params.N) * placement_.cwiseAbs2().rowwise().sum();
}

bool StftOperator::covers_signal() const noexcept {
  return (frame_.array() > 0.0).all();
}

cmat StftOperator::apply(const cvec& x) const {
  return dft_ * (x.asDiagonal() * placement_);
}

cvec StftOperator::adjoint(const cmat& z) const {
  return (placement_.conjugate().cwiseProduct(dft_.adjoint() * z)).rowwise().sum();
}

cvec StftOperator::pseudo_inverse(const cmat& z) const {
  if (!covers_signal()) {
    throw InvalidArgument("window does not cover every signal residue; A has no left inverse");
  }
  return adjoint(z).cwiseQuotient(frame_.cast<complex>());
}

StftTable forward(const ProblemParams& params, const SignalPair& pair) {
  check_pair(params, pair);
  return StftTable(StftOperator(params, pair.w).apply(pair.x));
}

SectionVector section(const ProblemParams& params, const SignalPair& pair, int r) {
  check_pair(params, pair);
  if (r < 0 || r >= params.R) {
    throw InvalidArgument("section index r=" + std::to_string(r) + " outside [0, R)");
  }
  SectionVector s;
  const long long shift = 1LL * r * params.L;
  s.shift = wrap(shift, params.N);
  s.entries.resize(params.W);
  for (int n = 0; n < params.W; ++n) s.entries[n] = pair.x[wrap(shift - n, params.N)] * pair.w[n];
  return s;
}

MeasurementSet magnitudes(const StftTable& table, std::span<const MeasurementIndex> indices) {
  MeasurementSet set;
  set.indices.assign(indices.begin(), indices.end());
  set.magnitudes.reserve(indices.size());
  std::set<MeasurementIndex> seen;
  for (const auto& idx : indices) {
    if (idx.m < 0 || idx.m >= table.N() || idx.r < 0 || idx.r >= table.R()) {
      throw InvalidArgument("measurement index (" + std::to_string(idx.m) + ", " +
                            std::to_string(idx.r) + ") outside the grid");
    }
    if (!seen.insert(idx).second) {
      throw InvalidArgument("duplicate measurement index (" + std::to_string(idx.m) + ", " +
                            std::to_string(idx.r) + ")");
    }
    set.magnitudes.push_back(std::abs(table(idx.m, idx.r)));
  }
  return set;
}

cmat operator_matrix(const ProblemParams& params, const cvec& w) {
  if (w.size() != params.W) throw InvalidArgument("window length does not match params.W");
  const long long rows = 1LL * params.N * params.R;
  if (rows > kMaxMaterializedRows) {
    throw InvalidArgument("operator matrix with " + std::to_string(rows) +
                          " rows is too large to materialise; use StftOperator");
  }
  cmat a = cmat::Zero(rows, params.N);
  for (int r = 0; r < params.R; ++r) {
    const long long shift = 1LL * r * params.L;
    for (int k = 0; k < params.W; ++k) {
      const int n = wrap(shift - k, params.N);
      for (int m = 0; m < params.N; ++m) {
        a(m + 1LL * params.N * r, n) =
            w[k] * std::polar(1.0, -kTwoPi * static_cast<double>(wrap(1LL * n * m, params.N)) / params.N);
      }
    }
  }
  return a;
}

std::vector<MeasurementIndex> full_grid(const ProblemParams& params) {
  std::vector<MeasurementIndex> grid;
  grid.reserve(static_cast<std::size_t>(params.N) * params.R);
  for (int m = 0; m < params.N; ++m)
    for (int r = 0; r < params.R; ++r) grid.push_back({m, r});
  return grid;
}

std::vector<MeasurementIndex> random_mask(const ProblemParams& params, int count, Rng& rng) {
  const int total = params.N * params.R;
  if (count < 0 || count > total) {
    throw InvalidArgument("mask size " + std::to_string(count) + " outside [0, " +
                          std::to_string(total) + "]");
  }
  std::vector<int> ids(total);
  std::iota(ids.begin(), ids.end(), 0);
  // Partial Fisher-Yates: the first `count` slots are a uniform sample.
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<int> pick(i, total - 1);
    std::swap(ids[i], ids[pick(rng.engine())]);
  }
  std::vector<MeasurementIndex> mask;
  mask.reserve(count);
  for (int i = 0; i < count; ++i) mask.push_back({ids[i] / params.R, ids[i] % params.R});
  return mask;
}

}  // namespace stftpr
