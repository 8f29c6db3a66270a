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

#include "adaptune/sim/ndt.hpp"

#include "adaptune/descriptor.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace adaptune::sim {

namespace {

std::int64_t cell_key(const Eigen::Vector3d & p, double resolution)
{
  constexpr std::int64_t kOffset = 1 << 20;
  constexpr std::int64_t kSpan = 1 << 21;
  const auto coord = [resolution](double v) {
    return static_cast<std::int64_t>(std::floor(v / resolution));
  };
  return ((coord(p.x()) + kOffset) * kSpan + (coord(p.y()) + kOffset)) * kSpan +
         (coord(p.z()) + kOffset);
}

Eigen::Matrix3d skew(const Eigen::Vector3d & v)
{
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d & omega)
{
  const double theta = omega.norm();
  if (theta < 1e-12) {
    return Eigen::Matrix3d::Identity() + skew(omega);
  }
  const Eigen::Matrix3d k = skew(omega / theta);
  return Eigen::Matrix3d::Identity() + std::sin(theta) * k + (1.0 - std::cos(theta)) * k * k;
}

}  // namespace

NdtGrid::NdtGrid(const PointCloud & cloud, double resolution, int min_points)
: resolution_(resolution)
{
  const std::vector<NdtVoxel> voxels = build_voxels(cloud, resolution, min_points);
  cells_.reserve(voxels.size());
  const Eigen::Matrix3d regularizer =
    1e-3 * resolution * resolution * Eigen::Matrix3d::Identity();
  for (const NdtVoxel & v : voxels) {
    Cell cell;
    cell.mean = v.mean;
    cell.info = (v.covariance + regularizer).inverse();
    cells_.emplace(cell_key(v.mean, resolution), cell);
  }
}

const NdtGrid::Cell * NdtGrid::lookup(const Eigen::Vector3d & p) const
{
  const auto it = cells_.find(cell_key(p, resolution_));
  return it == cells_.end() ? nullptr : &it->second;
}

NdtResult ndt_register(
  const PointCloud & source, const NdtGrid & target, const Pose & init, int max_iter,
  double tol)
{
  NdtResult result;
  result.pose = init;
  if (source.empty() || target.size() == 0) {
    result.degenerate = true;
    return result;
  }

  Pose pose = init;
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::Matrix<double, 6, 6> h = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
    int matched = 0;
    for (const Eigen::Vector3d & p : source.points) {
      const Eigen::Vector3d rotated = pose.rotation * p;
      const Eigen::Vector3d world = rotated + pose.translation;
      const NdtGrid::Cell * cell = target.lookup(world);
      if (cell == nullptr) {
        continue;
      }
      ++matched;
      const Eigen::Vector3d residual = world - cell->mean;
      Eigen::Matrix<double, 3, 6> jac;
      jac.leftCols<3>() = Eigen::Matrix3d::Identity();
      jac.rightCols<3>() = -skew(rotated);
      const Eigen::Matrix<double, 3, 6> weighted = cell->info * jac;
      h += jac.transpose() * weighted;
      g += weighted.transpose() * residual;
    }
    result.matched = matched;
    if (matched < 6) {
      // Not enough constraints for a 6-DoF solve.
      result.pose = init;
      result.degenerate = true;
      result.iterations = iter;
      return result;
    }
    const double damping = 1e-6 * std::max(1.0, h.trace() / 6.0);
    h.diagonal().array() += damping;
    Eigen::Matrix<double, 6, 1> delta = h.ldlt().solve(-g);
    if (!delta.allFinite()) {
      result.pose = init;
      result.degenerate = true;
      result.iterations = iter;
      return result;
    }
    // Trust region: cap translation and rotation step sizes.
    const double t_norm = delta.head<3>().norm();
    if (t_norm > 1.0) {
      delta.head<3>() *= 1.0 / t_norm;
    }
    const double r_norm = delta.tail<3>().norm();
    if (r_norm > 0.5) {
      delta.tail<3>() *= 0.5 / r_norm;
    }
    pose.translation += delta.head<3>();
    pose.rotation = exp_so3(delta.tail<3>()) * pose.rotation;
    result.iterations = iter + 1;
    if (delta.norm() < tol) {
      break;
    }
  }
  // Scrub accumulated floating-point drift; callers feed results back through
  // relative/compose cycles that amplify any orthonormality defect.
  pose.rotation = project_to_rotation(pose.rotation);
  result.pose = pose;
  return result;
}

}  // namespace adaptune::sim
