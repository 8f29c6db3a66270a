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

#include "adaptune/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptune {

bool is_rotation(const Eigen::Matrix3d & rotation, double tol)
{
  if (!rotation.allFinite()) {
    return false;
  }
  const Eigen::Matrix3d gram = rotation * rotation.transpose();
  const double ortho_err = (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det_err = std::abs(rotation.determinant() - 1.0);
  return ortho_err <= tol && det_err <= tol;
}

Eigen::Matrix3d project_to_rotation(const Eigen::Matrix3d & m)
{
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

Pose compose(const Pose & a, const Pose & b)
{
  Pose out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Pose inverse(const Pose & p)
{
  Pose out;
  out.rotation = p.rotation.transpose();
  out.translation = -(out.rotation * p.translation);
  return out;
}

Pose relative(const Pose & a, const Pose & b) { return compose(inverse(a), b); }

double rotation_angle(const Pose & p)
{
  const double c = std::clamp((p.rotation.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

void Trajectory::validate() const
{
  if (poses.size() != timestamps.size()) {
    throw std::invalid_argument(
      "trajectory: " + std::to_string(poses.size()) + " poses but " +
      std::to_string(timestamps.size()) + " timestamps");
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      throw std::invalid_argument(
        "trajectory: timestamps not strictly increasing at index " + std::to_string(i));
    }
  }
}

double arc_length(const Trajectory & t, std::size_t i, std::size_t j)
{
  if (i > j || j >= t.size()) {
    throw std::out_of_range(
      "arc_length: invalid range [" + std::to_string(i) + ", " + std::to_string(j) +
      ") for trajectory of length " + std::to_string(t.size()));
  }
  double total = 0.0;
  for (std::size_t k = i; k < j; ++k) {
    total += (t.poses[k + 1].translation - t.poses[k].translation).norm();
  }
  return total;
}

bool PointCloud::all_finite() const
{
  return std::all_of(
    points.begin(), points.end(), [](const Eigen::Vector3d & p) { return p.allFinite(); });
}

void Sequence::validate() const
{
  gt.validate();
  if (frames.size() != gt.size()) {
    throw std::invalid_argument(
      "sequence " + id + ": " + std::to_string(frames.size()) + " frames but " +
      std::to_string(gt.size()) + " ground-truth poses");
  }
  if (!frame_labels.empty() && frame_labels.size() != frames.size()) {
    throw std::invalid_argument(
      "sequence " + id + ": " + std::to_string(frame_labels.size()) + " labels but " +
      std::to_string(frames.size()) + " frames");
  }
}

}  // namespace adaptune
