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

#include "adaptune/sim/lidar.hpp"

#include "adaptune/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adaptune::sim {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;

Eigen::Matrix3d yaw_rotation(double yaw)
{
  Eigen::Matrix3d r;
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}
}  // namespace

void SensorConfig::validate() const
{
  if (n_rings < 1 || n_azimuth < 1) {
    throw std::invalid_argument("sensor: ring/azimuth counts must be >= 1");
  }
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("sensor: max_range must be > 0");
  }
  if (!(fov_low_deg < fov_high_deg)) {
    throw std::invalid_argument("sensor: vertical FOV must be a proper interval");
  }
  if (range_noise < 0.0 || !(rate_hz > 0.0)) {
    throw std::invalid_argument("sensor: invalid noise or rate");
  }
}

PointCloud render_scan(
  const CompositeWorld & world, const Pose & pose, const SensorConfig & cfg,
  std::mt19937_64 & rng)
{
  cfg.validate();
  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(cfg.n_rings) * cfg.n_azimuth / 2);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int ring = 0; ring < cfg.n_rings; ++ring) {
    const double frac =
      cfg.n_rings == 1 ? 0.5 : static_cast<double>(ring) / static_cast<double>(cfg.n_rings - 1);
    const double elevation = (cfg.fov_low_deg + frac * (cfg.fov_high_deg - cfg.fov_low_deg)) * kDegToRad;
    const double ce = std::cos(elevation);
    const double se = std::sin(elevation);
    for (int az = 0; az < cfg.n_azimuth; ++az) {
      const double azimuth = 2.0 * std::numbers::pi * az / cfg.n_azimuth;
      const Eigen::Vector3d dir_sensor(ce * std::cos(azimuth), ce * std::sin(azimuth), se);
      const Eigen::Vector3d dir_world = pose.rotation * dir_sensor;
      const std::optional<double> range = world.cast(pose.translation, dir_world, cfg.max_range);
      if (!range) {
        continue;
      }
      double measured = *range;
      if (cfg.range_noise > 0.0) {
        measured = std::max(0.05, measured + noise(rng) * cfg.range_noise);
      }
      cloud.points.push_back(dir_sensor * measured);
    }
  }
  return cloud;
}

Sequence generate_sequence(
  const CompositeWorld & world, const PathConfig & path, const SensorConfig & cfg,
  std::uint64_t seed, const std::string & id)
{
  cfg.validate();
  std::vector<Eigen::Vector3d> waypoints =
    path.waypoints.empty() ? world.default_path() : path.waypoints;
  if (waypoints.size() < 2) {
    throw std::invalid_argument("generate_sequence: need at least two waypoints");
  }
  if (!(path.speed > 0.0)) {
    throw std::invalid_argument("generate_sequence: speed must be > 0");
  }

  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const double step = (waypoints[i] - waypoints[i - 1]).norm();
    if (step < 1e-9) {
      throw std::invalid_argument("generate_sequence: duplicate consecutive waypoints");
    }
    cumulative.push_back(cumulative.back() + step);
  }
  const double total_len = cumulative.back();
  const double total_time = total_len / path.speed;
  const std::size_t n_frames = static_cast<std::size_t>(std::floor(total_time * cfg.rate_hz)) + 1;

  const auto locate = [&](double s) {
    s = std::clamp(s, 0.0, total_len);
    std::size_t seg = 1;
    while (seg + 1 < cumulative.size() && cumulative[seg] < s) {
      ++seg;
    }
    const double seg_len = cumulative[seg] - cumulative[seg - 1];
    const double alpha = (s - cumulative[seg - 1]) / seg_len;
    const Eigen::Vector3d pos = waypoints[seg - 1] + alpha * (waypoints[seg] - waypoints[seg - 1]);
    const Eigen::Vector3d tangent = (waypoints[seg] - waypoints[seg - 1]) / seg_len;
    return std::make_pair(pos, tangent);
  };

  Sequence seq;
  seq.id = id;
  std::mt19937_64 rng(derive_seed(seed, "scan_noise:" + id));
  seq.frames.reserve(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) {
    const double t = static_cast<double>(k) / cfg.rate_hz;
    const auto [pos, tangent] = locate(path.speed * t);
    Pose pose;
    pose.rotation = yaw_rotation(std::atan2(tangent.y(), tangent.x()));
    pose.translation = pos;
    seq.gt.poses.push_back(pose);
    seq.gt.timestamps.push_back(t);
    seq.frames.push_back(render_scan(world, pose, cfg, rng));
    seq.frame_labels.push_back(world.kind_at(pos.x()));
  }
  seq.validate();
  return seq;
}

}  // namespace adaptune::sim
