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

#include "adaptune/pipeline/trial_db.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace adaptune {

const std::vector<EnvDescriptor> * TrialDatabase::descriptors_for(
  const std::string & sequence_id) const
{
  for (const auto & [id, descriptors] : sequences) {
    if (id == sequence_id) {
      return &descriptors;
    }
  }
  return nullptr;
}

std::vector<LabeledSample> TrialDatabase::to_samples(double failure_cap) const
{
  std::vector<LabeledSample> samples;
  samples.reserve(sample_count());
  for (const TrialRecord & record : records) {
    const std::vector<EnvDescriptor> * descriptors = descriptors_for(record.sequence_id);
    if (descriptors == nullptr) {
      throw std::runtime_error(
        "trial database: no descriptors for sequence '" + record.sequence_id + "'");
    }
    const std::vector<double> encoded = encode(space, record.x);
    for (const FrameLabel & label : record.per_frame) {
      if (label.frame >= descriptors->size()) {
        throw std::runtime_error(
          "trial database: frame " + std::to_string(label.frame) + " out of range for '" +
          record.sequence_id + "'");
      }
      LabeledSample sample;
      const EnvDescriptor & e = (*descriptors)[label.frame];
      sample.q.values.reserve(e.values.size() + encoded.size());
      sample.q.values.insert(sample.q.values.end(), e.values.begin(), e.values.end());
      sample.q.values.insert(sample.q.values.end(), encoded.begin(), encoded.end());
      sample.y = record.failed ? failure_cap : std::min(label.y, failure_cap);
      samples.push_back(std::move(sample));
    }
  }
  return samples;
}

std::size_t TrialDatabase::sample_count() const
{
  std::size_t count = 0;
  for (const TrialRecord & record : records) {
    count += record.per_frame.size();
  }
  return count;
}

void TrialDatabase::save_jsonl(const std::string & path) const
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  nlohmann::json meta;
  meta["format"] = "adaptune.trials.v1";
  meta["pca_hash"] = pca_hash;
  meta["space"] = space.to_json();
  out << meta.dump() << '\n';
  for (const auto & [id, descriptors] : sequences) {
    nlohmann::json j;
    j["type"] = "frames";
    j["sequence_id"] = id;
    nlohmann::json rows = nlohmann::json::array();
    for (const EnvDescriptor & e : descriptors) {
      rows.push_back(e.values);
    }
    j["descriptors"] = std::move(rows);
    out << j.dump() << '\n';
  }
  for (const TrialRecord & record : records) {
    nlohmann::json j;
    j["type"] = "trial";
    j["sequence_id"] = record.sequence_id;
    j["x"] = params_to_json(space, record.x);
    if (record.failed) {
      j["y"] = "failed";
    } else {
      j["y"] = record.trial_y;
    }
    j["divergences"] = record.divergences;
    nlohmann::json labels = nlohmann::json::array();
    for (const FrameLabel & label : record.per_frame) {
      labels.push_back(nlohmann::json::array({label.frame, label.y}));
    }
    j["per_frame"] = std::move(labels);
    out << j.dump() << '\n';
  }
}

TrialDatabase TrialDatabase::load_jsonl(
  const std::string & path, const std::string & expected_pca_hash)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trial database '" + path + "'");
  }
  TrialDatabase db;
  std::string line;
  std::size_t line_no = 0;
  bool have_meta = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
      continue;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception & e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!have_meta) {
      if (j.value("format", "") != "adaptune.trials.v1") {
        throw std::runtime_error(path + ": unknown trial database format");
      }
      db.pca_hash = j.at("pca_hash").get<std::string>();
      db.space = ParameterSpace::from_json(j.at("space"));
      have_meta = true;
      continue;
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "frames") {
      std::vector<EnvDescriptor> descriptors;
      for (const nlohmann::json & row : j.at("descriptors")) {
        EnvDescriptor e;
        e.values = row.get<std::vector<double>>();
        descriptors.push_back(std::move(e));
      }
      db.sequences.emplace_back(j.at("sequence_id").get<std::string>(), std::move(descriptors));
    } else if (type == "trial") {
      TrialRecord record;
      record.sequence_id = j.at("sequence_id").get<std::string>();
      record.x = params_from_json(db.space, j.at("x"));
      if (j.at("y").is_string()) {
        record.failed = true;
        record.trial_y = std::numeric_limits<double>::quiet_NaN();
      } else {
        record.trial_y = j.at("y").get<double>();
      }
      record.divergences = j.value("divergences", 0);
      for (const nlohmann::json & label : j.at("per_frame")) {
        record.per_frame.push_back(
          FrameLabel{label.at(0).get<std::size_t>(), label.at(1).get<double>()});
      }
      db.records.push_back(std::move(record));
    } else {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown record type");
    }
  }
  if (!have_meta) {
    throw std::runtime_error(path + ": empty trial database");
  }
  if (!expected_pca_hash.empty() && db.pca_hash != expected_pca_hash) {
    throw std::runtime_error(
      path + ": descriptor model hash mismatch (database " + db.pca_hash + ", model " +
      expected_pca_hash + ")");
  }
  return db;
}

}  // namespace adaptune
