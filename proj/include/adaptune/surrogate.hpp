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
#include "adaptune/tpe.hpp"

#include <json.hpp>

#include <random>
#include <string>
#include <vector>

namespace adaptune {

/// Descriptor values followed by encoded parameter values: q = [E, x].
struct FeatureVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

FeatureVector build_feature(
  const EnvDescriptor & descriptor, const ParameterVector & x, const ParameterSpace & space);

struct LabeledSample {
  FeatureVector q;
  double y = 0.0;  // translational RTE, percent (or capped failure value)
};

/// k-nearest-neighbor regressor over feature vectors. Distances are Euclidean
/// in per-dimension min-max-normalized coordinates; constant dimensions
/// contribute nothing. Prediction is the unweighted mean of the k nearest
/// labels, distance ties broken by training insertion order.
class KnnSurrogate {
public:
  /// An unfitted surrogate; predict() rejects queries until fit() replaces it.
  KnnSurrogate() = default;

  /// Throws std::invalid_argument when fewer than k samples are given.
  static KnnSurrogate fit(std::vector<LabeledSample> samples, int k);

  double predict(const FeatureVector & q) const;

  int k() const { return k_; }
  std::size_t size() const { return samples_.size(); }
  std::size_t feature_dim() const { return scale_min_.size(); }
  double min_label() const;
  double max_label() const;

  /// Hash of the PCA model whose descriptors the training features embed;
  /// optional, used by the pipeline for consistency checks.
  std::string pca_hash;

  nlohmann::json to_json() const;
  static KnnSurrogate from_json(const nlohmann::json & j);
  void save(const std::string & path) const;
  static KnnSurrogate load(const std::string & path);

private:
  int k_ = 5;
  std::vector<LabeledSample> samples_;
  std::vector<double> scale_min_;
  std::vector<double> scale_max_;
};

/// Minimizes the predicted error over the parameter space with the SMBO
/// search (budget trials), holding the environment descriptor fixed.
/// Returns the best trial's parameter vector; `predicted` (optional) receives
/// its predicted error.
ParameterVector select_parameters(
  const KnnSurrogate & surrogate, const EnvDescriptor & descriptor, const ParameterSpace & space,
  int budget, const TpeConfig & cfg, std::mt19937_64 & rng, double * predicted = nullptr);

}  // namespace adaptune
