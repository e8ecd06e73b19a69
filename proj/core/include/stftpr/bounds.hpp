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

#ifndef STFTPR_BOUNDS_HPP
#define STFTPR_BOUNDS_HPP

#include <vector>

#include "stftpr/core.hpp"
#include "stftpr/stft.hpp"

namespace stftpr {

// Measurement counts sufficient for generic recovery:
//
//   known window:  2(2W-1) + ceil((4 alpha - 1)(N - W - alpha) / alpha)
//   blind window:  3(2W-1) + ceil((4 alpha - 1)(N - W - 2 alpha) / alpha)
//
// The recursion term is clamped at zero when the initial blocks already cover
// the signal.

struct BoundReport {
  int known_window_count = 0;
  int blind_count = 0;
  int four_N = 0;
  int four_N_plus_2W = 0;
  int alpha = 0;
};

int known_window_bound(const ProblemParams& params);
int blind_bound(const ProblemParams& params);
BoundReport bound_report(const ProblemParams& params);

/// A run of measurements (m_begin .. m_begin + count - 1, r) taken from the
/// section at shift j * alpha.
struct MeasurementBlock {
  long long j = 0;
  int r = 0;
  int m_begin = 0;
  int count = 0;
};

/// Blocks in solver order: j = 0 and j = 1 with 2W-1 samples each, then
/// j = 2, 3, ... with 4 alpha - 1 samples each. The last block is trimmed so
/// that the total equals known_window_bound. Frequencies start at m = 0; a
/// block whose shift lands on an already used section continues after the
/// frequencies taken there.
///
/// When a section runs out of frequencies (2W-1 > N, or many blocks on few
/// sections) the rest of the block moves on to the next sections, so the size
/// still equals the bound, but such a plan no longer measures the intended
/// sections and plan_is_exact is false. N >= 2W-1 and N >= 4 alpha - 1 with
/// R large enough keep it exact.
std::vector<MeasurementBlock> known_window_plan(const ProblemParams& params);

/// Blocks at j = 0, 1, -1 with 2W-1 samples, then the recursion blocks
/// j = 2, 3, ...; the total equals blind_bound. Same conventions as
/// known_window_plan.
std::vector<MeasurementBlock> blind_plan(const ProblemParams& params);

/// Every block lies on the section at shift j * alpha.
bool plan_is_exact(const ProblemParams& params, const std::vector<MeasurementBlock>& blocks);

/// Extra blocks that tie the two ends of the blind index window together.
/// Without them the bound-sized set leaves a one-parameter phase family
/// (see recover_blind). Either the trimmed last recursion block is completed
/// to 4 alpha - 1 samples, or a 3-sample block is added at the next shift.
/// Requires N >= W + 2 alpha and W > alpha in addition to the blind_plan
/// preconditions.
std::vector<MeasurementBlock> blind_seam_plan(const ProblemParams& params);

std::vector<MeasurementIndex> indices_of(const std::vector<MeasurementBlock>& blocks);

std::vector<MeasurementIndex> known_window_measurement_set(const ProblemParams& params);
std::vector<MeasurementIndex> blind_measurement_set(const ProblemParams& params);
/// blind_measurement_set followed by the seam indices.
std::vector<MeasurementIndex> blind_measurement_set_with_seam(const ProblemParams& params);

struct BoundCurveRow {
  int L = 0;
  int W = 0;
  int known = 0;
  int blind = 0;
  int cap_known = 0;  // 4N
  int cap_blind = 0;  // 4N + 2W
};

/// One row per (L, W) with W <= N and L <= N.
std::vector<BoundCurveRow> bound_curves(int N, const std::vector<int>& L_list, const std::vector<int>& W_range);

}  // namespace stftpr

#endif  // STFTPR_BOUNDS_HPP
