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

#include "stftpr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace stftpr {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::size_t> sorted_order(const MeasurementSet& set) {
  if (set.indices.size() != set.magnitudes.size()) {
    throw InvalidArgument("measurement indices and magnitudes are not aligned");
  }
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return set.indices[a] < set.indices[b]; });
  return order;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, int line) {
  s = trim(s);
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw IoError("line " + std::to_string(line) + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s, int line) {
  const std::string token(trim(s));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != token.size() || token.empty()) {
    throw IoError("line " + std::to_string(line) + ": expected a number, got '" + token + "'");
  }
  return v;
}

json complex_array(const cvec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

cvec complex_vector(const json& arr, const char* name) {
  if (!arr.is_array()) throw IoError(std::string("'") + name + "' must be an array");
  cvec v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    if (e.is_number()) {
      v[static_cast<Eigen::Index>(i)] = complex(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      v[static_cast<Eigen::Index>(i)] = complex(e[0].get<double>(), e[1].get<double>());
    } else {
      throw IoError(std::string("'") + name + "' entries must be numbers or [re, im] pairs");
    }
  }
  return v;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

json params_json(const ProblemParams& p) {
  return {{"N", p.N}, {"W", p.W}, {"L", p.L}, {"alpha", p.alpha}, {"R", p.R}};
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string measurement_set_to_csv(const MeasurementSet& set) {
  std::string out = "m,r,magnitude\n";
  for (std::size_t k : sorted_order(set)) {
    out += std::to_string(set.indices[k].m) + ',' + std::to_string(set.indices[k].r) + ',' +
           format_double(set.magnitudes[k]) + '\n';
  }
  return out;
}

MeasurementSet measurement_set_from_csv(std::string_view text) {
  MeasurementSet set;
  int line_no = 0;
  bool header = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!header) {
      if (line != "m,r,magnitude") throw IoError("expected header 'm,r,magnitude'");
      header = true;
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw IoError("line " + std::to_string(line_no) + ": expected three fields");
    }
    set.indices.push_back({parse_int(line.substr(0, c1), line_no), parse_int(line.substr(c1 + 1, c2 - c1 - 1), line_no)});
    set.magnitudes.push_back(parse_double(line.substr(c2 + 1), line_no));
  }
  if (!header) throw IoError("empty measurement CSV");
  return set;
}

std::string measurement_set_to_json(const MeasurementSet& set) {
  json idx = json::array();
  json mags = json::array();
  for (std::size_t k : sorted_order(set)) {
    idx.push_back({set.indices[k].m, set.indices[k].r});
    mags.push_back(set.magnitudes[k]);
  }
  return json{{"indices", idx}, {"magnitudes", mags}}.dump(2) + '\n';
}

MeasurementSet measurement_set_from_json(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("indices") || !j.contains("magnitudes")) {
    throw IoError("measurement JSON needs 'indices' and 'magnitudes'");
  }
  const json& idx = j["indices"];
  const json& mags = j["magnitudes"];
  if (!idx.is_array() || !mags.is_array() || idx.size() != mags.size()) {
    throw IoError("'indices' and 'magnitudes' must be arrays of equal length");
  }
  MeasurementSet set;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (!idx[k].is_array() || idx[k].size() != 2 || !idx[k][0].is_number_integer() ||
        !idx[k][1].is_number_integer() || !mags[k].is_number()) {
      throw IoError("malformed measurement entry " + std::to_string(k));
    }
    set.indices.push_back({idx[k][0].get<int>(), idx[k][1].get<int>()});
    set.magnitudes.push_back(mags[k].get<double>());
  }
  return set;
}

std::string instance_to_json(const Instance& instance) {
  const json j{{"N", instance.params.N},
               {"W", instance.params.W},
               {"L", instance.params.L},
               {"x", complex_array(instance.pair.x)},
               {"w", complex_array(instance.pair.w)}};
  return j.dump(2) + '\n';
}

Instance instance_from_json(std::string_view text) {
  const json j = parse_json(text);
  for (const char* key : {"N", "W", "L", "x", "w"}) {
    if (!j.is_object() || !j.contains(key)) throw IoError(std::string("instance JSON is missing '") + key + "'");
  }
  if (!j["N"].is_number_integer() || !j["W"].is_number_integer() || !j["L"].is_number_integer()) {
    throw IoError("N, W and L must be integers");
  }
  Instance inst;
  inst.params = make_params(j["N"].get<int>(), j["W"].get<int>(), j["L"].get<int>());
  inst.pair.x = complex_vector(j["x"], "x");
  inst.pair.w = complex_vector(j["w"], "w");
  if (inst.pair.x.size() != inst.params.N || inst.pair.w.size() != inst.params.W) {
    throw IoError("instance vectors must have lengths N and W");
  }
  return inst;
}

std::string recovery_result_to_json(const RecoveryResult& result, const ProblemParams& params, Mode mode,
                                    const std::optional<double>& error) {
  json j{{"mode", to_string(mode)},
         {"params", params_json(params)},
         {"status", to_string(result.status)},
         {"relation_residual", result.relation_residual},
         {"consistency_residual", result.consistency_residual},
         {"steps_used", result.steps_used},
         {"measurements_used", result.measurements_used},
         {"candidate_classes", result.candidate_classes},
         {"message", result.message}};
  if (error) j["quotient_error"] = *error;
  if (result.status == RecoveryStatus::Unique) {
    j["estimate"] = {{"x", complex_array(result.estimate.x)}, {"w", complex_array(result.estimate.w)}};
  }
  return j.dump(2) + '\n';
}

std::string rrr_outcome_to_json(const RrrOutcome& outcome, const ProblemParams& params) {
  json j{{"params", params_json(params)},
         {"iterations", outcome.iterations},
         {"converged", outcome.converged},
         {"final_step_ratio", outcome.final_step_ratio},
         {"x_hat", complex_array(outcome.x_hat)}};
  if (outcome.error) j["error"] = *outcome.error;
  if (outcome.success) j["success"] = *outcome.success;
  return j.dump(2) + '\n';
}

}  // namespace stftpr
