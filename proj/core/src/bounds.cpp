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

#include "stftpr/bounds.hpp"

#include <algorithm>

namespace stftpr {

namespace {

long long ceil_div_pos(long long a, long long b) { return (a + b - 1) / b; }

// ceil((4 alpha - 1) * remaining / alpha), clamped at zero.
int recursion_count(int alpha, long long remaining) {
  if (remaining <= 0) return 0;
  return static_cast<int>(ceil_div_pos((4LL * alpha - 1) * remaining, alpha));
}

// Per-section frequency allocation. Blocks whose shifts land on the same
// section (possible when W < alpha or R is tiny) get fresh m values.
// A block that needs more frequencies than its section has left continues on
// the following sections.
class Planner {
 public:
  explicit Planner(const ProblemParams& params) : params_(params), next_free_(params.R, 0) {}

  void add(long long j, int count) {
    int r = shift_index(params_, j);
    for (int visited = 0; count > 0; ++visited, r = (r + 1) % params_.R) {
      if (visited == params_.R) throw InvalidArgument("measurement plan exceeds the N x R grid");
      const int take = std::min(count, params_.N - next_free_[r]);
      if (take <= 0) continue;
      plan_.push_back({j, r, next_free_[r], take});
      next_free_[r] += take;
      count -= take;
    }
  }

  // Recursion blocks j = first, first + 1, ... covering `remaining` entries,
  // alpha per block, with the last block trimmed to the bound.
  void add_recursion(long long first, long long remaining) {
    if (remaining <= 0) return;
    const int a = params_.alpha;
    const long long blocks = ceil_div_pos(remaining, a);
    int left = recursion_count(a, remaining);
    for (long long b = 0; b < blocks; ++b) {
      const int count = std::min(4 * a - 1, left);
      add(first + b, count);
      left -= count;
    }
  }

  std::vector<MeasurementBlock>& plan() { return plan_; }

 private:
  ProblemParams params_;
  std::vector<int> next_free_;
  std::vector<MeasurementBlock> plan_;
};

Planner known_planner(const ProblemParams& params) {
  Planner p(params);
  p.add(0, 2 * params.W - 1);
  p.add(1, 2 * params.W - 1);
  p.add_recursion(2, 1LL * params.N - params.W - params.alpha);
  return p;
}

Planner blind_planner(const ProblemParams& params) {
  Planner p(params);
  for (long long j : {0LL, 1LL, -1LL}) p.add(j, 2 * params.W - 1);
  p.add_recursion(2, 1LL * params.N - params.W - 2LL * params.alpha);
  return p;
}

}  // namespace

int known_window_bound(const ProblemParams& params) {
  return 2 * (2 * params.W - 1) + recursion_count(params.alpha, 1LL * params.N - params.W - params.alpha);
}

int blind_bound(const ProblemParams& params) {
  return 3 * (2 * params.W - 1) + recursion_count(params.alpha, 1LL * params.N - params.W - 2LL * params.alpha);
}

BoundReport bound_report(const ProblemParams& params) {
  BoundReport b;
  b.known_window_count = known_window_bound(params);
  b.blind_count = blind_bound(params);
  b.four_N = 4 * params.N;
  b.four_N_plus_2W = 4 * params.N + 2 * params.W;
  b.alpha = params.alpha;
  return b;
}

std::vector<MeasurementBlock> known_window_plan(const ProblemParams& params) {
  return known_planner(params).plan();
}

std::vector<MeasurementBlock> blind_plan(const ProblemParams& params) { return blind_planner(params).plan(); }

std::vector<MeasurementBlock> blind_seam_plan(const ProblemParams& params) {
  const int a = params.alpha;
  const long long remaining = 1LL * params.N - params.W - 2LL * a;
  if (remaining < 0) throw InvalidArgument("seam closure needs N >= W + 2 alpha");
  if (params.W <= a) throw InvalidArgument("seam closure needs W > alpha");
  Planner p = blind_planner(params);
  const std::size_t before = p.plan().size();
  const long long blocks = ceil_div_pos(remaining, a);
  if (remaining % a != 0) {
    // Complete the trimmed last recursion block (j = blocks + 1).
    p.add(blocks + 1, 4 * a - 1 - p.plan().back().count);
  } else {
    p.add(blocks + 2, 3);
  }
  return {p.plan().begin() + static_cast<std::ptrdiff_t>(before), p.plan().end()};
}

bool plan_is_exact(const ProblemParams& params, const std::vector<MeasurementBlock>& blocks) {
  return std::all_of(blocks.begin(), blocks.end(),
                     [&](const MeasurementBlock& b) { return b.r == shift_index(params, b.j); });
}

std::vector<MeasurementIndex> indices_of(const std::vector<MeasurementBlock>& blocks) {
  std::vector<MeasurementIndex> out;
  for (const auto& b : blocks) {
    for (int m = b.m_begin; m < b.m_begin + b.count; ++m) out.push_back({m, b.r});
  }
  return out;
}

std::vector<MeasurementIndex> known_window_measurement_set(const ProblemParams& params) {
  return indices_of(known_window_plan(params));
}

std::vector<MeasurementIndex> blind_measurement_set(const ProblemParams& params) {
  return indices_of(blind_plan(params));
}

std::vector<MeasurementIndex> blind_measurement_set_with_seam(const ProblemParams& params) {
  auto all = blind_measurement_set(params);
  const auto seam = indices_of(blind_seam_plan(params));
  all.insert(all.end(), seam.begin(), seam.end());
  return all;
}

std::vector<BoundCurveRow> bound_curves(int N, const std::vector<int>& L_list, const std::vector<int>& W_range) {
  std::vector<BoundCurveRow> rows;
  for (int L : L_list) {
    for (int W : W_range) {
      if (W < 1 || W > N || L < 1 || L > N) continue;
      const ProblemParams p = make_params(N, W, L);
      rows.push_back({L, W, known_window_bound(p), blind_bound(p), 4 * N, 4 * N + 2 * W});
    }
  }
  return rows;
}

}  // namespace stftpr
