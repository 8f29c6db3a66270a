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

#include <Eigen/Core>

#include <cstdint>
#include <unordered_map>

namespace adaptune::sim {

/// Voxelized normal-distribution map of a target cloud. Each occupied cell
/// stores its mean and the inverse of (covariance + 1e-3 * resolution^2 * I);
/// the regularizer keeps near-degenerate cells invertible.
class NdtGrid {
public:
  struct Cell {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d info = Eigen::Matrix3d::Identity();
  };

  NdtGrid(const PointCloud & cloud, double resolution, int min_points = 5);

  /// Cell containing the point, or nullptr.
  const Cell * lookup(const Eigen::Vector3d & p) const;

  double resolution() const { return resolution_; }
  std::size_t size() const { return cells_.size(); }

private:
  double resolution_;
  std::unordered_map<std::int64_t, Cell> cells_;
};

struct NdtResult {
  Pose pose;
  bool degenerate = false;  // too few source points fell into occupied cells
  int iterations = 0;
  int matched = 0;
};

/// Gauss-Newton refinement of the pose that registers `source` onto the
/// grid: minimizes the sum of per-point Mahalanobis terms under each point's
/// containing cell. Stops at max_iter or when the update norm drops below
/// tol. Returns init flagged degenerate when the system is unsolvable.
NdtResult ndt_register(
  const PointCloud & source, const NdtGrid & target, const Pose & init, int max_iter = 30,
  double tol = 1e-4);

}  // namespace adaptune::sim
