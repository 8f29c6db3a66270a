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
#include "adaptune/sim/world.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace adaptune::sim {

/// Spinning LiDAR model, defaults approximating a 32-ring sensor.
struct SensorConfig {
  int n_rings = 32;
  int n_azimuth = 360;
  double max_range = 50.0;
  double fov_low_deg = -30.0;
  double fov_high_deg = 10.0;
  double range_noise = 0.02;  // Gaussian sigma, meters
  double rate_hz = 10.0;

  void validate() const;
};

/// One scan at the given pose: per (ring, azimuth) ray the nearest primitive
/// intersection within max_range plus Gaussian range noise, in the sensor
/// frame. No-hit rays are omitted.
PointCloud render_scan(
  const CompositeWorld & world, const Pose & pose, const SensorConfig & cfg,
  std::mt19937_64 & rng);

struct PathConfig {
  std::vector<Eigen::Vector3d> waypoints;  // empty: use the world's default path
  double speed = 1.5;                      // m/s
};

/// Ground-truth poses interpolated along the waypoint polyline at constant
/// speed and sampled at the sensor rate, one rendered scan per pose. Frame
/// labels carry the world kind at each position.
Sequence generate_sequence(
  const CompositeWorld & world, const PathConfig & path, const SensorConfig & cfg,
  std::uint64_t seed, const std::string & id);

}  // namespace adaptune::sim
