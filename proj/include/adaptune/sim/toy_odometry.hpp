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
#include "adaptune/param_space.hpp"
#include "adaptune/sim/ndt.hpp"

#include <memory>
#include <optional>

namespace adaptune::sim {

/// The toy odometry's two tuned knobs.
struct OdometryParams {
  double ndt_resolution = 2.0;     // meters
  double keyframe_interval = 3.0;  // meters of travel before rebasing

  void validate() const;

  /// Tuning space: resolution in [0.5, 4.0], interval in [0.5, 10.0].
  static ParameterSpace default_space();
  static OdometryParams from_vector(const ParameterSpace & space, const ParameterVector & x);
  ParameterVector to_vector(const ParameterSpace & space) const;
};

struct ToyOdometryOptions {
  /// Clouds are thinned to at most this many evenly spread points per
  /// registration-resolution cell before use, so dense flat regions cannot
  /// outvote sparse structure. The same thinning feeds the keyframe grid,
  /// which keeps registering a frame against itself an exact fixed point.
  int points_per_cell = 8;
  int max_source_points = 4000;  // stride cap after the per-cell thinning
  int grid_min_points = 5;
  int max_iterations = 30;
  double tolerance = 1e-4;
};

/// Keyframe-based NDT scan-matching odometry, steppable so parameters can
/// change mid-run without resetting the keyframe state. Each frame registers
/// against the current keyframe's grid with a constant-velocity initial
/// guess; the keyframe is replaced once estimated travel exceeds the
/// keyframe interval. Degenerate registrations hold the previous relative
/// motion and bump the divergence counter.
class ToyNdtOdometry {
public:
  explicit ToyNdtOdometry(const OdometryParams & params, const ToyOdometryOptions & opts = {});

  /// Processes one frame and returns its world-pose estimate. The first
  /// frame anchors the trajectory at identity.
  Pose step(const PointCloud & frame);

  /// Applies from the next step; a resolution change rebuilds the current
  /// keyframe's grid, the keyframe cloud itself is preserved.
  void set_params(const OdometryParams & params);

  const OdometryParams & params() const { return params_; }
  int divergence_count() const { return divergences_; }
  std::size_t frame_count() const { return frame_count_; }

private:
  PointCloud downsample(const PointCloud & cloud) const;
  void rebase(const PointCloud & cloud, const Pose & pose);

  OdometryParams params_;
  ToyOdometryOptions opts_;
  std::unique_ptr<NdtGrid> keyframe_grid_;
  PointCloud keyframe_cloud_;
  Pose keyframe_pose_;
  Pose last_pose_;
  Pose last_motion_;
  double travel_since_keyframe_ = 0.0;
  int divergences_ = 0;
  std::size_t frame_count_ = 0;
};

struct OdomRun {
  Trajectory trajectory;
  int divergences = 0;
  bool failed = false;
};

/// Whole-sequence convenience wrapper. Trajectory timestamps mirror the
/// sequence's; pose count always equals the frame count.
OdomRun run_toy_odometry(
  const Sequence & seq, const OdometryParams & params, const ToyOdometryOptions & opts = {});

}  // namespace adaptune::sim
