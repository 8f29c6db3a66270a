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

#include "adaptune/descriptor.hpp"
#include "adaptune/param_space.hpp"
#include "adaptune/surrogate.hpp"

#include <string>
#include <vector>

namespace adaptune {

/// Per-frame training label of one trial: frame index i and RTE (or analytic
/// error) y_ij of the sub-trajectory starting there.
struct FrameLabel {
  std::size_t frame = 0;
  double y = 0.0;
};

/// One offline evaluation: a parameter sample, its trial objective, and the
/// per-frame labels.
struct TrialRecord {
  std::string sequence_id;
  ParameterVector x;
  double trial_y = 0.0;
  bool failed = false;
  int divergences = 0;
  std::vector<FrameLabel> per_frame;
};

/// All (environment descriptor, parameter set, per-frame error) triples from
/// the offline runs. Frame descriptors are stored once per sequence; records
/// reference them by frame index. The hash of the PCA model that produced the
/// descriptors is stored and checked on load.
struct TrialDatabase {
  std::string pca_hash;
  ParameterSpace space;
  std::vector<std::pair<std::string, std::vector<EnvDescriptor>>> sequences;
  std::vector<TrialRecord> records;

  const std::vector<EnvDescriptor> * descriptors_for(const std::string & sequence_id) const;

  /// Joined training samples q = [E_i, encode(x_j)] with labels capped at
  /// failure_cap (failed trials contribute the cap itself).
  std::vector<LabeledSample> to_samples(double failure_cap) const;
  std::size_t sample_count() const;

  void save_jsonl(const std::string & path) const;
  /// Throws when expected_pca_hash is non-empty and does not match the file.
  static TrialDatabase load_jsonl(
    const std::string & path, const std::string & expected_pca_hash = "");
};

}  // namespace adaptune
