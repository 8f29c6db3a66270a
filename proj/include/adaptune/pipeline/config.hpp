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
#include "adaptune/sim/analytic.hpp"
#include "adaptune/sim/lidar.hpp"
#include "adaptune/sim/toy_odometry.hpp"
#include "adaptune/toml.hpp"
#include "adaptune/tpe.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace adaptune {

enum class BlackboxKind { kToyNdt, kAnalytic, kExternal, kGtReplay };

std::string to_string(BlackboxKind kind);
BlackboxKind blackbox_kind_from_string(const std::string & s);

struct BlackboxConfig {
  BlackboxKind kind = BlackboxKind::kToyNdt;
  /// Label ceiling for diverged/failed runs entering the surrogate training
  /// set (percent RTE).
  double failure_rte = 100.0;
  std::string external_command;
  double analytic_noise_sigma = 0.0;
  std::map<std::string, sim::AnalyticEnv> analytic_envs;
  sim::ToyOdometryOptions toy;
};

struct OnlineConfig {
  int update_period = 10;    // frames between parameter selections
  int selection_budget = 64; // SMBO trials per selection
  /// Parameters used before the first selection; defaults to the space
  /// midpoint when unset.
  std::optional<ParameterVector> initial;
};

struct MetricsConfig {
  double label_length = 25.0;  // sub-trajectory length for training labels
  int kitti_stride = 10;
};

struct SurrogateConfig {
  int k = 5;
};

struct SimulationConfig {
  std::vector<sim::WorldKind> worlds{
    sim::WorldKind::kCave, sim::WorldKind::kOpen, sim::WorldKind::kStreet};
  std::vector<Eigen::Vector3d> waypoints;  // empty: the worlds' default path
  double speed = 1.5;
  std::uint64_t world_seed = 0;
  sim::SensorConfig sensor;
};

struct PipelineConfig {
  ParameterSpace space;
  int n_trials = 256;
  TpeConfig tpe;
  DescriptorConfig descriptor;
  MetricsConfig metrics;
  SurrogateConfig surrogate;
  OnlineConfig online;
  BlackboxConfig blackbox;
  SimulationConfig sim;

  void validate() const;

  /// Initial online parameters: configured value or the space midpoint.
  ParameterVector initial_parameters() const;

  static PipelineConfig from_toml(const toml::Table & table);
  static PipelineConfig load(const std::string & path);
};

}  // namespace adaptune
