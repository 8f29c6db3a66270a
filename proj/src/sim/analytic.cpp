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

#include "adaptune/sim/analytic.hpp"

#include <stdexcept>

namespace adaptune::sim {

AnalyticBlackbox::AnalyticBlackbox(
  ParameterSpace space, std::map<std::string, AnalyticEnv> envs, double noise_sigma)
: space_(std::move(space)), envs_(std::move(envs)), noise_sigma_(noise_sigma)
{
  space_.validate();
  if (noise_sigma_ < 0.0) {
    throw std::invalid_argument("analytic blackbox: noise sigma must be >= 0");
  }
  for (const auto & [id, env] : envs_) {
    if (env.optimum.size() != space_.size()) {
      throw std::invalid_argument(
        "analytic blackbox: environment '" + id + "' optimum dimensionality mismatch");
    }
    for (double v : env.optimum) {
      if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument(
          "analytic blackbox: environment '" + id + "' optimum outside [0,1]^d");
      }
    }
    if (!(env.curvature > 0.0)) {
      throw std::invalid_argument(
        "analytic blackbox: environment '" + id + "' curvature must be > 0");
    }
  }
}

const AnalyticEnv & AnalyticBlackbox::env(const std::string & env_id) const
{
  const auto it = envs_.find(env_id);
  if (it == envs_.end()) {
    throw std::invalid_argument("analytic blackbox: unknown environment '" + env_id + "'");
  }
  return it->second;
}

double AnalyticBlackbox::error(
  const std::string & env_id, const ParameterVector & x, double noise) const
{
  const AnalyticEnv & e = env(env_id);
  const std::vector<double> u = encode(space_, x);
  double dist2 = 0.0;
  for (std::size_t d = 0; d < u.size(); ++d) {
    const double diff = u[d] - e.optimum[d];
    dist2 += diff * diff;
  }
  return e.curvature * dist2 + e.base + noise;
}

}  // namespace adaptune::sim
