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
#include <json.hpp>

#include <array>
#include <string>
#include <vector>

namespace adaptune {

/// Normal-distribution voxel: mean and sample covariance of its member points.
struct NdtVoxel {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  int count = 0;
};

/// Buckets points by floor(coord / voxel_size) and keeps voxels with at least
/// min_points members. Covariance uses the n-1 divisor. Voxels are returned
/// in ascending cell-key order so output is independent of hash layout.
std::vector<NdtVoxel> build_voxels(
  const PointCloud & cloud, double voxel_size, int min_points = 5);

enum class ShapeClass { kLinear = 0, kPlanar = 1, kSpherical = 2 };

/// Shape class plus a 0..2 subclass: 9 distinct labels total.
struct VoxelClass {
  ShapeClass shape = ShapeClass::kSpherical;
  int subclass = 0;

  int label() const { return static_cast<int>(shape) * 3 + subclass; }
};

struct ClassifierConfig {
  /// Eigenvalue-ratio threshold t_e in (0,1) for the linear/planar tests.
  double eigen_ratio_threshold = 0.3;
  /// Tilt-angle bin edges (degrees from vertical) for linear and planar
  /// subclasses.
  std::array<double, 2> tilt_edges_deg{30.0, 60.0};
  /// lambda1/lambda2 bin edges for spherical subclasses.
  std::array<double, 2> sphere_ratio_edges{1.5, 3.0};
};

/// Classifies a voxel covariance by its sorted eigenvalues (l1 >= l2 >= l3,
/// clamped at zero): linear when l2/l1 < t_e, else planar when l3/l2 < t_e,
/// else spherical. Subclasses bin the dominant-axis tilt (linear), the plane
/// normal tilt (planar), or l1/l2 (spherical). Tilt is measured from the
/// sensor z-axis so labels are invariant to yaw. An all-zero covariance maps
/// to spherical subclass 0.
VoxelClass classify_voxel(const Eigen::Matrix3d & covariance, const ClassifierConfig & cfg);

struct DescriptorConfig {
  double voxel_size = 2.0;
  int min_points = 5;
  double range_bin = 3.0;
  int n_bins = 10;
  ClassifierConfig classifier;
  int pca_dim = 10;

  int histogram_size() const { return n_bins * 9; }
  void validate() const;

  nlohmann::json to_json() const;
  static DescriptorConfig from_json(const nlohmann::json & j);
};

/// Flattened (range bin x subclass) histogram, length n_bins * 9;
/// index = bin * 9 + label.
using RawHistogram = std::vector<double>;

/// Tallies voxels into range bins by their mean's distance from the sensor
/// origin; voxels at or beyond n_bins * range_bin are dropped. The result is
/// L1-normalized when it has any mass (pass normalize = false for raw counts).
RawHistogram build_histogram(
  const std::vector<NdtVoxel> & voxels, const Eigen::Vector3d & sensor_origin,
  const DescriptorConfig & cfg, bool normalize = true);

/// Voxelize + classify + histogram, sensor at the origin of the cloud frame.
RawHistogram compute_histogram(const PointCloud & cloud, const DescriptorConfig & cfg);

/// PCA projection of the histogram space, with the descriptor configuration
/// embedded so online extraction cannot drift from the offline fit.
struct PcaModel {
  Eigen::VectorXd mean;        // histogram_size
  Eigen::MatrixXd components;  // pca_dim x histogram_size, orthonormal rows
  DescriptorConfig config;

  int dim() const { return static_cast<int>(components.rows()); }

  nlohmann::json to_json() const;
  static PcaModel from_json(const nlohmann::json & j);
  void save(const std::string & path) const;
  static PcaModel load(const std::string & path);

  /// FNV-1a digest of the canonical serialization; used to tie trial
  /// databases and surrogates to the model that produced their descriptors.
  std::string hash() const;
};

/// Fits the model on mean-centered histograms: components are the top-D
/// eigenvectors of the sample covariance by descending eigenvalue, each row
/// signed so its largest-magnitude entry is positive. Requires at least D
/// samples.
PcaModel fit_pca(const std::vector<RawHistogram> & histograms, const DescriptorConfig & cfg);

/// PCA-reduced environment descriptor, length pca_dim.
struct EnvDescriptor {
  std::vector<double> values;
};

EnvDescriptor transform(const PcaModel & pca, const RawHistogram & histogram);

/// Full per-frame path: histogram of the cloud, then PCA projection. An empty
/// cloud yields the descriptor of the zero histogram (logged).
EnvDescriptor extract(const PointCloud & cloud, const PcaModel & pca);

}  // namespace adaptune
