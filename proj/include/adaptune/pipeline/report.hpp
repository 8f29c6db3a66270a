// Copyright 2026 The Adaptune Authors
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

#pragma once

#include "adaptune/geometry.hpp"
#include "adaptune/metrics.hpp"
#include "adaptune/param_space.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace adaptune {

/// Parameter selection applied from the following frame onward.
struct TimelineEntry {
  std::size_t frame = 0;
  ParameterVector x;
  std::optional<double> predicted;  // surrogate prediction, adaptive runs only
};

/// Outcome of one black-box run. Wall-clock timings are kept out of the
/// deterministic serialization (reports must be byte-reproducible under fixed
/// seeds) and go to a sidecar file instead.
struct RunReport {
  std::string sequence_id;
  std::string method;
  std::string metric;  // "rte" or "analytic"
  double mean_error = 0.0;
  std::optional<double> kitti;
  std::optional<double> mean_rotation_deg;
  double label_length = 0.0;
  std::size_t frames = 0;
  int divergences = 0;
  std::vector<TimelineEntry> timeline;

  // Volatile measurements, serialized separately.
  double wall_ms = 0.0;
  std::vector<double> extract_ms;
  std::vector<double> selection_ms;

  nlohmann::json to_json(const ParameterSpace & space) const;
  nlohmann::json timings_json() const;
  static RunReport from_json(const nlohmann::json & j, ParameterSpace * space_out = nullptr);

  void save(const ParameterSpace & space, const std::string & path) const;
  void save_timings(const std::string & path) const;
  static RunReport load(const std::string & path, ParameterSpace * space_out = nullptr);
};

/// Run outputs beyond the report itself.
struct RunResult {
  RunReport report;
  Trajectory trajectory;        // empty for analytic runs
  std::vector<RteSample> rtes;  // empty for analytic runs
};

/// Table-I-style comparison of several run reports: one row per method with
/// per-sequence errors and deltas against a baseline method. Mismatched
/// sequence sets are listed, never silently dropped.
nlohmann::json evaluate_reports(
  const std::vector<RunReport> & reports, const std::string & baseline_method = "");

std::string comparison_to_csv(const nlohmann::json & comparison);

}  // namespace adaptune
