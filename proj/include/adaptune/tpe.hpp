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

#include "adaptune/param_space.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace adaptune {

/// One evaluated parameter set. `failed` marks trials whose objective raised
/// or returned a non-finite value; their y is meaningless.
struct TrialResult {
  ParameterVector x;
  double y = 0.0;
  bool failed = false;
};

/// Append-only evaluation history of one optimization run.
struct History {
  std::vector<TrialResult> trials;

  std::size_t size() const { return trials.size(); }
  std::size_t successful_count() const;
  /// Best (lowest-y) successful trial, or nullptr when none exists.
  const TrialResult * best() const;
};

struct TpeConfig {
  int n_startup = 16;
  int n_candidates = 64;
  double gamma = 0.25;
  std::uint64_t seed = 0;

  void validate() const;
};

/// History split at the gamma-quantile of successful objective values.
/// `below` holds trials with y strictly under the threshold (never failed
/// ones); `above` holds everything else, failed trials included. `below` may
/// be empty (ties, tiny histories) — callers fall back to random sampling.
struct HistorySplit {
  std::vector<TrialResult> below;
  std::vector<TrialResult> above;
  double threshold = 0.0;
};

/// Throws std::invalid_argument on an empty history.
HistorySplit split_history(const History & h, double gamma);

/// Per-dimension Parzen window over [0,1]^d: for each dimension a mixture of
/// truncated Gaussian kernels at the observed coordinates plus one uniform
/// prior component, all equally weighted. Bandwidth follows a Silverman-style
/// rule: max(sigma_hat * n^(-1/5), 1e-3), with sigma_hat floored at 0.05 when
/// fewer than 3 points are available.
class ParzenEstimator {
public:
  ParzenEstimator(const std::vector<std::vector<double>> & points, std::size_t dim);

  std::size_t dim() const { return dims_.size(); }
  std::size_t kernel_count() const { return count_; }

  double pdf_dim(std::size_t d, double u) const;
  double log_pdf(const std::vector<double> & u) const;
  std::vector<double> sample(std::mt19937_64 & rng) const;

  double bandwidth(std::size_t d) const { return dims_[d].bandwidth; }

private:
  struct DimModel {
    std::vector<double> locations;
    double bandwidth = 0.05;
  };
  std::vector<DimModel> dims_;
  std::size_t count_ = 0;
  double component_weight_ = 1.0;  // prior and every kernel share 1/(n+1)
};

/// One SMBO step: below the startup count (or with an empty below-set) draws
/// from the prior; otherwise fits Parzen windows l (good trials) and g (bad
/// trials), draws candidates from l, and returns the candidate maximizing
/// the density ratio l/g. Ties are broken in favor of the first draw.
ParameterVector suggest(
  const History & h, const ParameterSpace & space, const TpeConfig & cfg, std::mt19937_64 & rng);

/// Objective value for a parameter vector; lower is better. Throwing or
/// returning a non-finite value marks the trial as failed.
using Objective = std::function<double(const ParameterVector &)>;

/// Runs the sequential suggest/evaluate loop for exactly n_trials trials.
History optimize(
  const Objective & objective, const ParameterSpace & space, int n_trials, const TpeConfig & cfg,
  std::mt19937_64 & rng);

/// Seeds the generator from cfg.seed.
History optimize(
  const Objective & objective, const ParameterSpace & space, int n_trials, const TpeConfig & cfg);

/// JSONL persistence: one {"x": {...}, "y": float|"failed"} object per line.
void save_history(const History & h, const ParameterSpace & space, const std::string & path);
History load_history(const ParameterSpace & space, const std::string & path);

}  // namespace adaptune
