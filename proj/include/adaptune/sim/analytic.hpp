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

#include <map>
#include <string>
#include <vector>

namespace adaptune::sim {

/// Quadratic error bowl for one environment, expressed in encoded [0,1]^d
/// coordinates so the optimum is planted by construction.
struct AnalyticEnv {
  std::vector<double> optimum;  // m(e) in [0,1]^d
  double curvature = 1.0;       // a(e) > 0
  double base = 0.0;            // error floor at the optimum
};

/// Oracle-verifiable stand-in for a real odometry + metric pipeline:
/// error(e, x) = curvature(e) * ||encode(x) - optimum(e)||^2 + base(e) + noise.
class AnalyticBlackbox {
public:
  AnalyticBlackbox(
    ParameterSpace space, std::map<std::string, AnalyticEnv> envs, double noise_sigma = 0.0);

  const ParameterSpace & space() const { return space_; }
  double noise_sigma() const { return noise_sigma_; }
  bool has_env(const std::string & env_id) const { return envs_.count(env_id) > 0; }
  const AnalyticEnv & env(const std::string & env_id) const;

  /// Deterministic part plus a caller-supplied noise offset (callers draw
  /// one offset per trial so per-frame values stay constant within a trial).
  double error(const std::string & env_id, const ParameterVector & x, double noise = 0.0) const;

private:
  ParameterSpace space_;
  std::map<std::string, AnalyticEnv> envs_;
  double noise_sigma_;
};

}  // namespace adaptune::sim
