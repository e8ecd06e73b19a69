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

#ifndef STFTPR_IO_HPP
#define STFTPR_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "stftpr/ambiguity.hpp"
#include "stftpr/core.hpp"
#include "stftpr/proof_solver.hpp"
#include "stftpr/rrr.hpp"
#include "stftpr/stft.hpp"

namespace stftpr {

class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_text_file(const std::filesystem::path& path);
/// Creates missing parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Header `m,r,magnitude`, rows in (m, r) order, 17 significant digits.
std::string measurement_set_to_csv(const MeasurementSet& set);
MeasurementSet measurement_set_from_csv(std::string_view text);

/// {"indices": [[m, r], ...], "magnitudes": [...]} in (m, r) order.
std::string measurement_set_to_json(const MeasurementSet& set);
MeasurementSet measurement_set_from_json(std::string_view text);

struct Instance {
  ProblemParams params;
  SignalPair pair;
};

/// {"N", "W", "L", "x": [[re, im], ...], "w": [[re, im], ...]}.
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(std::string_view text);

std::string recovery_result_to_json(const RecoveryResult& result, const ProblemParams& params, Mode mode,
                                    const std::optional<double>& error = std::nullopt);

std::string rrr_outcome_to_json(const RrrOutcome& outcome, const ProblemParams& params);

}  // namespace stftpr

#endif  // STFTPR_IO_HPP
