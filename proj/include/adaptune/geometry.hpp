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

#include <Eigen/Core>

#include <string>
#include <vector>

namespace adaptune {

/// Rigid-body pose: orthonormal rotation (det +1) plus translation in meters.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose Identity() { return Pose{}; }
};

/// True when R * R^T == I and det(R) == 1 within `tol`.
bool is_rotation(const Eigen::Matrix3d & rotation, double tol = 1e-9);

/// Nearest rotation matrix (polar decomposition, det forced to +1).
Eigen::Matrix3d project_to_rotation(const Eigen::Matrix3d & m);

/// Group product a * b.
Pose compose(const Pose & a, const Pose & b);

/// Group inverse.
Pose inverse(const Pose & p);

/// inverse(a) * b: the motion that takes a to b.
Pose relative(const Pose & a, const Pose & b);

/// Rotation angle of the pose in radians.
double rotation_angle(const Pose & p);

/// Timestamped pose sequence. Timestamps are seconds, strictly increasing.
struct Trajectory {
  std::vector<Pose> poses;
  std::vector<double> timestamps;

  std::size_t size() const { return poses.size(); }
  bool empty() const { return poses.empty(); }

  /// Throws std::invalid_argument when the size or timestamp invariants are broken.
  void validate() const;
};

/// Sum of Euclidean distances between consecutive translations from i to j.
/// Zero when i == j. Throws std::out_of_range for bad indices.
double arc_length(const Trajectory & t, std::size_t i, std::size_t j);

/// Unordered 3-D points in the sensor frame, meters.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool all_finite() const;
};

/// One recorded drive: per-frame point clouds aligned with a ground-truth
/// trajectory. `frame_labels` optionally names the environment of each frame
/// (used by the analytic black box); empty when unlabeled. `source_dir` is
/// set when the sequence was loaded from disk.
struct Sequence {
  std::string id;
  std::vector<PointCloud> frames;
  Trajectory gt;
  std::vector<std::string> frame_labels;
  std::string source_dir;

  std::size_t size() const { return frames.size(); }

  /// Throws std::invalid_argument when frame/pose counts disagree.
  void validate() const;
};

}  // namespace adaptune
