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

#include "adaptune/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace adaptune {

FeatureVector build_feature(
  const EnvDescriptor & descriptor, const ParameterVector & x, const ParameterSpace & space)
{
  FeatureVector q;
  q.values.reserve(descriptor.values.size() + space.size());
  for (double v : descriptor.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("build_feature: non-finite descriptor component");
    }
    q.values.push_back(v);
  }
  for (double v : encode(space, x)) {
    q.values.push_back(v);
  }
  return q;
}

KnnSurrogate KnnSurrogate::fit(std::vector<LabeledSample> samples, int k)
{
  if (k < 1) {
    throw std::invalid_argument("knn: k must be >= 1");
  }
  if (samples.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument(
      "knn: need at least " + std::to_string(k) + " samples, got " +
      std::to_string(samples.size()));
  }
  const std::size_t dim = samples.front().q.size();
  KnnSurrogate model;
  model.k_ = k;
  model.scale_min_.assign(dim, std::numeric_limits<double>::infinity());
  model.scale_max_.assign(dim, -std::numeric_limits<double>::infinity());
  for (const LabeledSample & s : samples) {
    if (s.q.size() != dim) {
      throw std::invalid_argument("knn: inconsistent feature dimensionality");
    }
    if (!std::isfinite(s.y)) {
      throw std::invalid_argument("knn: non-finite label");
    }
    for (std::size_t d = 0; d < dim; ++d) {
      if (!std::isfinite(s.q.values[d])) {
        throw std::invalid_argument("knn: non-finite feature component");
      }
      model.scale_min_[d] = std::min(model.scale_min_[d], s.q.values[d]);
      model.scale_max_[d] = std::max(model.scale_max_[d], s.q.values[d]);
    }
  }
  model.samples_ = std::move(samples);
  return model;
}

double KnnSurrogate::predict(const FeatureVector & q) const
{
  if (samples_.empty()) {
    throw std::logic_error("knn: predict called on an unfitted surrogate");
  }
  const std::size_t dim = feature_dim();
  if (q.size() != dim) {
    throw std::invalid_argument(
      "knn: query has " + std::to_string(q.size()) + " dims, model expects " +
      std::to_string(dim));
  }
  // Exhaustive scan; training sets stay desk-scale (<= ~1e5 samples).
  std::vector<std::pair<double, std::size_t>> dists;
  dists.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double span = scale_max_[d] - scale_min_[d];
      if (span <= 0.0) {
        continue;  // constant dimension
      }
      const double diff = (q.values[d] - samples_[i].q.values[d]) / span;
      acc += diff * diff;
    }
    dists.emplace_back(acc, i);
  }
  const std::size_t k = static_cast<std::size_t>(k_);
  std::partial_sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k), dists.end());
  double mean = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mean += samples_[dists[i].second].y;
  }
  return mean / static_cast<double>(k);
}

double KnnSurrogate::min_label() const
{
  double m = std::numeric_limits<double>::infinity();
  for (const LabeledSample & s : samples_) {
    m = std::min(m, s.y);
  }
  return m;
}

double KnnSurrogate::max_label() const
{
  double m = -std::numeric_limits<double>::infinity();
  for (const LabeledSample & s : samples_) {
    m = std::max(m, s.y);
  }
  return m;
}

nlohmann::json KnnSurrogate::to_json() const
{
  nlohmann::json j;
  j["format"] = "adaptune.surrogate.v1";
  j["k"] = k_;
  j["feature_dim"] = feature_dim();
  j["pca_hash"] = pca_hash;
  j["scale_min"] = scale_min_;
  j["scale_max"] = scale_max_;
  nlohmann::json rows = nlohmann::json::array();
  for (const LabeledSample & s : samples_) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : s.q.values) {
      row.push_back(v);
    }
    row.push_back(s.y);
    rows.push_back(std::move(row));
  }
  j["samples"] = std::move(rows);
  return j;
}

KnnSurrogate KnnSurrogate::from_json(const nlohmann::json & j)
{
  if (j.value("format", "") != "adaptune.surrogate.v1") {
    throw std::runtime_error("surrogate: unknown format tag");
  }
  std::vector<LabeledSample> samples;
  for (const nlohmann::json & row : j.at("samples")) {
    LabeledSample s;
    const std::size_t n = row.size();
    if (n < 2) {
      throw std::runtime_error("surrogate: malformed sample row");
    }
    s.q.values.reserve(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      s.q.values.push_back(row.at(i).get<double>());
    }
    s.y = row.at(n - 1).get<double>();
    samples.push_back(std::move(s));
  }
  KnnSurrogate model = fit(std::move(samples), j.at("k").get<int>());
  model.pca_hash = j.value("pca_hash", "");
  return model;
}

void KnnSurrogate::save(const std::string & path) const
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << to_json().dump() << '\n';
}

KnnSurrogate KnnSurrogate::load(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open surrogate '" + path + "'");
  }
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

ParameterVector select_parameters(
  const KnnSurrogate & surrogate, const EnvDescriptor & descriptor, const ParameterSpace & space,
  int budget, const TpeConfig & cfg, std::mt19937_64 & rng, double * predicted)
{
  if (budget < 1) {
    throw std::invalid_argument("select_parameters: budget must be >= 1");
  }
  const Objective objective = [&](const ParameterVector & x) {
    return surrogate.predict(build_feature(descriptor, x, space));
  };
  const History h = optimize(objective, space, budget, cfg, rng);
  const TrialResult * best = h.best();
  if (best == nullptr) {
    throw std::runtime_error("select_parameters: all trials failed");
  }
  if (predicted != nullptr) {
    *predicted = best->y;
  }
  return best->x;
}

}  // namespace adaptune
