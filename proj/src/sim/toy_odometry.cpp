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

#include "adaptune/sim/toy_odometry.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <stdexcept>

namespace adaptune::sim {

void OdometryParams::validate() const
{
  if (!(ndt_resolution > 0.0) || !(keyframe_interval > 0.0)) {
    throw std::invalid_argument("odometry params must be positive");
  }
}

ParameterSpace OdometryParams::default_space()
{
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("ndt_resolution", 0.5, 4.0));
  space.specs.push_back(ParameterSpec::Uniform("keyframe_interval", 0.5, 10.0));
  return space;
}

OdometryParams OdometryParams::from_vector(
  const ParameterSpace & space, const ParameterVector & x)
{
  validate_vector(space, x);
  OdometryParams params;
  const int res_idx = space.index_of("ndt_resolution");
  const int int_idx = space.index_of("keyframe_interval");
  if (res_idx < 0 || int_idx < 0) {
    throw std::invalid_argument(
      "toy odometry expects 'ndt_resolution' and 'keyframe_interval' dimensions");
  }
  params.ndt_resolution = std::get<double>(x.values[static_cast<std::size_t>(res_idx)]);
  params.keyframe_interval = std::get<double>(x.values[static_cast<std::size_t>(int_idx)]);
  params.validate();
  return params;
}

ParameterVector OdometryParams::to_vector(const ParameterSpace & space) const
{
  ParameterVector x;
  x.values.resize(space.size());
  const int res_idx = space.index_of("ndt_resolution");
  const int int_idx = space.index_of("keyframe_interval");
  if (res_idx < 0 || int_idx < 0 || space.size() != 2) {
    throw std::invalid_argument("toy odometry space mismatch");
  }
  x.values[static_cast<std::size_t>(res_idx)] = ndt_resolution;
  x.values[static_cast<std::size_t>(int_idx)] = keyframe_interval;
  return x;
}

ToyNdtOdometry::ToyNdtOdometry(const OdometryParams & params, const ToyOdometryOptions & opts)
: params_(params), opts_(opts)
{
  params_.validate();
}

PointCloud ToyNdtOdometry::downsample(const PointCloud & cloud) const
{
  PointCloud thinned;
  if (opts_.points_per_cell > 0) {
    const double res = params_.ndt_resolution;
    constexpr std::int64_t kOffset = 1 << 20;
    constexpr std::int64_t kSpan = 1 << 21;
    const auto key_of = [res](const Eigen::Vector3d & p) {
      return ((static_cast<std::int64_t>(std::floor(p.x() / res)) + kOffset) * kSpan +
              (static_cast<std::int64_t>(std::floor(p.y() / res)) + kOffset)) *
               kSpan +
             (static_cast<std::int64_t>(std::floor(p.z() / res)) + kOffset);
    };
    // Two passes so the kept points spread evenly over each cell's content;
    // taking the first k would keep only one scan ring per cell.
    std::unordered_map<std::int64_t, std::pair<int, int>> cells;  // total, emitted
    cells.reserve(cloud.size() / 4 + 1);
    for (const Eigen::Vector3d & p : cloud.points) {
      cells[key_of(p)].first += 1;
    }
    const int cap = opts_.points_per_cell;
    thinned.points.reserve(cloud.size() / 2 + 1);
    for (const Eigen::Vector3d & p : cloud.points) {
      auto & [total, seen] = cells[key_of(p)];
      const int want = std::min(cap, total);
      // Keep point #seen when the evenly spaced quota advances.
      const bool keep = (seen + 1) * want / total > seen * want / total;
      ++seen;
      if (keep) {
        thinned.points.push_back(p);
      }
    }
  } else {
    thinned = cloud;
  }

  const std::size_t limit = static_cast<std::size_t>(opts_.max_source_points);
  if (limit == 0 || thinned.size() <= limit) {
    return thinned;
  }
  PointCloud out;
  out.points.reserve(limit);
  const double step = static_cast<double>(thinned.size()) / static_cast<double>(limit);
  for (std::size_t i = 0; i < limit; ++i) {
    out.points.push_back(thinned.points[static_cast<std::size_t>(i * step)]);
  }
  return out;
}

void ToyNdtOdometry::rebase(const PointCloud & cloud, const Pose & pose)
{
  keyframe_cloud_ = cloud;  // raw, so resolution changes can re-thin it
  keyframe_pose_ = pose;
  keyframe_grid_ = std::make_unique<NdtGrid>(
    downsample(cloud), params_.ndt_resolution, opts_.grid_min_points);
  travel_since_keyframe_ = 0.0;
}

Pose ToyNdtOdometry::step(const PointCloud & frame)
{
  ++frame_count_;
  if (!keyframe_grid_) {
    rebase(frame, Pose::Identity());
    last_pose_ = Pose::Identity();
    last_motion_ = Pose::Identity();
    return last_pose_;
  }

  const Pose predicted = compose(last_pose_, last_motion_);
  const Pose init_rel = relative(keyframe_pose_, predicted);
  const NdtResult reg =
    ndt_register(downsample(frame), *keyframe_grid_, init_rel, opts_.max_iterations, opts_.tolerance);

  Pose pose;
  if (reg.degenerate) {
    ++divergences_;
    pose = predicted;  // hold the previous relative motion
  } else {
    pose = compose(keyframe_pose_, reg.pose);
  }
  pose.rotation = project_to_rotation(pose.rotation);

  const Pose motion = relative(last_pose_, pose);
  last_motion_ = motion;
  last_pose_ = pose;
  travel_since_keyframe_ += motion.translation.norm();
  if (travel_since_keyframe_ > params_.keyframe_interval) {
    rebase(frame, pose);
  }
  return pose;
}

void ToyNdtOdometry::set_params(const OdometryParams & params)
{
  params.validate();
  const bool resolution_changed =
    std::abs(params.ndt_resolution - params_.ndt_resolution) > 1e-12;
  params_ = params;
  if (resolution_changed && keyframe_grid_) {
    keyframe_grid_ = std::make_unique<NdtGrid>(
      keyframe_cloud_, params_.ndt_resolution, opts_.grid_min_points);
  }
}

OdomRun run_toy_odometry(
  const Sequence & seq, const OdometryParams & params, const ToyOdometryOptions & opts)
{
  seq.validate();
  ToyNdtOdometry odometry(params, opts);
  OdomRun run;
  run.trajectory.poses.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    run.trajectory.poses.push_back(odometry.step(seq.frames[i]));
    run.trajectory.timestamps.push_back(seq.gt.timestamps[i]);
  }
  run.divergences = odometry.divergence_count();
  for (const Pose & p : run.trajectory.poses) {
    if (!p.translation.allFinite() || !p.rotation.allFinite()) {
      run.failed = true;
      break;
    }
  }
  return run;
}

}  // namespace adaptune::sim
