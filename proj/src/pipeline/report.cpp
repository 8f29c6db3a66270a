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

#include "adaptune/pipeline/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace adaptune {

nlohmann::json RunReport::to_json(const ParameterSpace & space) const
{
  nlohmann::json j;
  j["format"] = "adaptune.report.v1";
  j["space"] = space.to_json();
  j["sequence_id"] = sequence_id;
  j["method"] = method;
  j["metric"] = metric;
  j["mean_error"] = mean_error;
  j["kitti_rte"] = kitti ? nlohmann::json(*kitti) : nlohmann::json(nullptr);
  j["mean_rotation_deg"] =
    mean_rotation_deg ? nlohmann::json(*mean_rotation_deg) : nlohmann::json(nullptr);
  j["label_length_m"] = label_length;
  j["frames"] = frames;
  j["divergences"] = divergences;
  nlohmann::json entries = nlohmann::json::array();
  for (const TimelineEntry & entry : timeline) {
    nlohmann::json e;
    e["frame"] = entry.frame;
    e["params"] = params_to_json(space, entry.x);
    e["predicted"] = entry.predicted ? nlohmann::json(*entry.predicted) : nlohmann::json(nullptr);
    entries.push_back(std::move(e));
  }
  j["timeline"] = std::move(entries);
  return j;
}

nlohmann::json RunReport::timings_json() const
{
  nlohmann::json j;
  j["wall_ms"] = wall_ms;
  j["extract_ms"] = extract_ms;
  j["selection_ms"] = selection_ms;
  return j;
}

RunReport RunReport::from_json(const nlohmann::json & j, ParameterSpace * space_out)
{
  if (j.value("format", "") != "adaptune.report.v1") {
    throw std::runtime_error("report: unknown format tag");
  }
  const ParameterSpace space = ParameterSpace::from_json(j.at("space"));
  RunReport report;
  report.sequence_id = j.at("sequence_id").get<std::string>();
  report.method = j.at("method").get<std::string>();
  report.metric = j.at("metric").get<std::string>();
  report.mean_error = j.at("mean_error").get<double>();
  if (!j.at("kitti_rte").is_null()) {
    report.kitti = j.at("kitti_rte").get<double>();
  }
  if (!j.at("mean_rotation_deg").is_null()) {
    report.mean_rotation_deg = j.at("mean_rotation_deg").get<double>();
  }
  report.label_length = j.at("label_length_m").get<double>();
  report.frames = j.at("frames").get<std::size_t>();
  report.divergences = j.at("divergences").get<int>();
  for (const nlohmann::json & e : j.at("timeline")) {
    TimelineEntry entry;
    entry.frame = e.at("frame").get<std::size_t>();
    entry.x = params_from_json(space, e.at("params"));
    if (!e.at("predicted").is_null()) {
      entry.predicted = e.at("predicted").get<double>();
    }
    report.timeline.push_back(std::move(entry));
  }
  if (space_out != nullptr) {
    *space_out = space;
  }
  return report;
}

void RunReport::save(const ParameterSpace & space, const std::string & path) const
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << to_json(space).dump(2) << '\n';
}

void RunReport::save_timings(const std::string & path) const
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << timings_json().dump(2) << '\n';
}

RunReport RunReport::load(const std::string & path, ParameterSpace * space_out)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open report '" + path + "'");
  }
  nlohmann::json j;
  in >> j;
  return from_json(j, space_out);
}

nlohmann::json evaluate_reports(
  const std::vector<RunReport> & reports, const std::string & baseline_method)
{
  if (reports.empty()) {
    throw std::invalid_argument("evaluate: need at least one report");
  }
  std::vector<std::string> methods;
  std::vector<std::string> sequences;
  std::map<std::pair<std::string, std::string>, double> values;
  for (const RunReport & r : reports) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    if (std::find(sequences.begin(), sequences.end(), r.sequence_id) == sequences.end()) {
      sequences.push_back(r.sequence_id);
    }
    const auto key = std::make_pair(r.method, r.sequence_id);
    if (values.count(key) > 0) {
      throw std::invalid_argument(
        "evaluate: duplicate report for method '" + r.method + "', sequence '" + r.sequence_id +
        "'");
    }
    values[key] = r.mean_error;
  }
  const std::string baseline = baseline_method.empty() ? methods.front() : baseline_method;
  if (std::find(methods.begin(), methods.end(), baseline) == methods.end()) {
    throw std::invalid_argument("evaluate: baseline method '" + baseline + "' has no report");
  }

  nlohmann::json mismatches = nlohmann::json::array();
  nlohmann::json rows = nlohmann::json::array();
  for (const std::string & method : methods) {
    nlohmann::json per_sequence = nlohmann::json::object();
    double sum = 0.0;
    std::size_t count = 0;
    double shared_delta_sum = 0.0;
    std::size_t shared_count = 0;
    for (const std::string & seq : sequences) {
      const auto it = values.find({method, seq});
      if (it == values.end()) {
        mismatches.push_back("method '" + method + "' has no report for sequence '" + seq + "'");
        continue;
      }
      nlohmann::json cell;
      cell["value"] = it->second;
      const auto base_it = values.find({baseline, seq});
      if (method != baseline && base_it != values.end()) {
        cell["delta"] = it->second - base_it->second;
        shared_delta_sum += it->second - base_it->second;
        ++shared_count;
      }
      per_sequence[seq] = std::move(cell);
      sum += it->second;
      ++count;
    }
    nlohmann::json row;
    row["method"] = method;
    row["per_sequence"] = std::move(per_sequence);
    row["average"] = count > 0 ? nlohmann::json(sum / static_cast<double>(count))
                               : nlohmann::json(nullptr);
    row["average_delta"] = (method != baseline && shared_count > 0)
                             ? nlohmann::json(shared_delta_sum / static_cast<double>(shared_count))
                             : nlohmann::json(nullptr);
    rows.push_back(std::move(row));
  }

  nlohmann::json out;
  out["format"] = "adaptune.comparison.v1";
  out["baseline"] = baseline;
  out["sequences"] = sequences;
  out["methods"] = std::move(rows);
  out["mismatches"] = std::move(mismatches);
  return out;
}

std::string comparison_to_csv(const nlohmann::json & comparison)
{
  const auto format_cell = [](double value, const nlohmann::json & delta) {
    char buf[64];
    if (delta.is_null()) {
      std::snprintf(buf, sizeof(buf), "%.3f", value);
    } else {
      std::snprintf(buf, sizeof(buf), "%.3f (%+.3f)", value, delta.get<double>());
    }
    return std::string(buf);
  };

  std::string csv = "method";
  for (const auto & seq : comparison.at("sequences")) {
    csv += "," + seq.get<std::string>();
  }
  csv += ",average\n";
  for (const auto & row : comparison.at("methods")) {
    csv += row.at("method").get<std::string>();
    for (const auto & seq : comparison.at("sequences")) {
      const auto & per_sequence = row.at("per_sequence");
      csv += ",";
      if (per_sequence.contains(seq.get<std::string>())) {
        const auto & cell = per_sequence.at(seq.get<std::string>());
        csv += format_cell(cell.at("value").get<double>(), cell.value("delta", nlohmann::json()));
      } else {
        csv += "-";
      }
    }
    csv += ",";
    if (!row.at("average").is_null()) {
      csv += format_cell(row.at("average").get<double>(), row.at("average_delta"));
    } else {
      csv += "-";
    }
    csv += "\n";
  }
  return csv;
}

}  // namespace adaptune
