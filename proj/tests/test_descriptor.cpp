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

#include "adaptune/descriptor.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

using namespace adaptune;

namespace {

Eigen::Matrix3d diag(double a, double b, double c)
{
  Eigen::Vector3d v(a, b, c);
  return v.asDiagonal();
}

Eigen::Matrix3d random_psd(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::Matrix3d a;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      a(r, c) = unit(rng);
    }
  }
  return a.transpose() * a;
}

}  // namespace

TEST_CASE("build_voxels degenerate and rank-1 cases")
{
  PointCloud identical;
  for (int i = 0; i < 10; ++i) {
    identical.points.emplace_back(0.4, 0.4, 0.4);
  }
  const std::vector<NdtVoxel> one = build_voxels(identical, 1.0, 5);
  REQUIRE(one.size() == 1);
  CHECK(one[0].count == 10);
  CHECK(one[0].covariance.cwiseAbs().maxCoeff() < 1e-12);

  PointCloud segment;
  for (int i = 0; i <= 20; ++i) {
    segment.points.emplace_back(0.025 * i, 0.0, 0.0);
  }
  const std::vector<NdtVoxel> rank1 = build_voxels(segment, 1.0, 5);
  REQUIRE(rank1.size() == 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(rank1[0].covariance);
  CHECK(eig.eigenvalues()(2) > 0.0);
  CHECK(std::abs(eig.eigenvalues()(1)) < 1e-12);
  CHECK(std::abs(eig.eigenvalues()(0)) < 1e-12);
}

TEST_CASE("build_voxels means match direct bucketing")
{
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 4.0);
  PointCloud cloud;
  for (int i = 0; i < 1000; ++i) {
    cloud.points.emplace_back(unit(rng), unit(rng), unit(rng));
  }
  const double voxel_size = 2.0;
  const std::vector<NdtVoxel> voxels = build_voxels(cloud, voxel_size, 5);
  CHECK(voxels.size() <= 8);

  std::map<std::array<int, 3>, std::pair<Eigen::Vector3d, int>> buckets;
  for (const Eigen::Vector3d & p : cloud.points) {
    std::array<int, 3> key{
      static_cast<int>(std::floor(p.x() / voxel_size)),
      static_cast<int>(std::floor(p.y() / voxel_size)),
      static_cast<int>(std::floor(p.z() / voxel_size))};
    auto & [sum, count] = buckets[key];
    sum += p;
    ++count;
  }
  for (const NdtVoxel & v : voxels) {
    std::array<int, 3> key{
      static_cast<int>(std::floor(v.mean.x() / voxel_size)),
      static_cast<int>(std::floor(v.mean.y() / voxel_size)),
      static_cast<int>(std::floor(v.mean.z() / voxel_size))};
    REQUIRE(buckets.count(key) == 1);
    const auto & [sum, count] = buckets[key];
    CHECK(v.count == count);
    CHECK((v.mean - sum / count).norm() < 1e-12);
  }

  CHECK(build_voxels(PointCloud{}, 1.0, 5).empty());
}

TEST_CASE("classify_voxel base cases")
{
  ClassifierConfig cfg;
  cfg.eigen_ratio_threshold = 0.1;

  // Dominant axis vertical: linear, tilt 0 -> subclass 0.
  const VoxelClass vertical_line = classify_voxel(diag(0.01, 0.05, 1.0), cfg);
  CHECK(vertical_line.shape == ShapeClass::kLinear);
  CHECK(vertical_line.subclass == 0);

  // Isotropic: spherical, ratio 1 -> subclass 0.
  const VoxelClass iso = classify_voxel(diag(1.0, 1.0, 1.0), cfg);
  CHECK(iso.shape == ShapeClass::kSpherical);
  CHECK(iso.subclass == 0);

  // All-zero covariance: spherical subclass 0 by convention.
  const VoxelClass zero = classify_voxel(Eigen::Matrix3d::Zero(), cfg);
  CHECK(zero.shape == ShapeClass::kSpherical);
  CHECK(zero.subclass == 0);

  // Horizontal plane: planar with a vertical normal -> subclass 0.
  const VoxelClass floor_patch = classify_voxel(diag(1.0, 0.8, 0.001), cfg);
  CHECK(floor_patch.shape == ShapeClass::kPlanar);
  CHECK(floor_patch.subclass == 0);
}

TEST_CASE("classify_voxel recovers a 45-degree plane normal")
{
  ClassifierConfig cfg;
  cfg.eigen_ratio_threshold = 0.1;
  // Plane with eigenvalues (1, 0.8, 0.05) whose normal is tilted 45 degrees.
  const Eigen::Matrix3d r =
    Eigen::AngleAxisd(std::numbers::pi / 4.0, Eigen::Vector3d::UnitX()).toRotationMatrix();
  const Eigen::Matrix3d cov = r * diag(1.0, 0.8, 0.05) * r.transpose();
  const VoxelClass cls = classify_voxel(cov, cfg);
  CHECK(cls.shape == ShapeClass::kPlanar);
  CHECK(cls.subclass == 1);  // 30 <= 45 < 60
}

TEST_CASE("classification is scale invariant and total")
{
  ClassifierConfig cfg;
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Matrix3d cov = random_psd(rng);
    const double c = std::pow(10.0, log_scale(rng));
    const VoxelClass a = classify_voxel(cov, cfg);
    const VoxelClass b = classify_voxel(c * cov, cfg);
    CHECK(a.shape == b.shape);
    CHECK(a.subclass == b.subclass);
    CHECK(a.label() >= 0);
    CHECK(a.label() < 9);
  }
}

TEST_CASE("histogram binning and normalization")
{
  DescriptorConfig cfg;
  CHECK(cfg.histogram_size() == 90);

  const RawHistogram empty = build_histogram({}, Eigen::Vector3d::Zero(), cfg);
  CHECK(std::all_of(empty.begin(), empty.end(), [](double v) { return v == 0.0; }));

  // One elongated vertical voxel at distance 4 m: range bin 1, linear/0.
  NdtVoxel voxel;
  voxel.mean = Eigen::Vector3d(4.0, 0.0, 0.0);
  voxel.covariance = diag(0.001, 0.002, 1.0);
  voxel.count = 50;
  const RawHistogram h = build_histogram({voxel}, Eigen::Vector3d::Zero(), cfg);
  CHECK(h[9 * 1 + 0] == doctest::Approx(1.0));
  double total = 0.0;
  for (double v : h) {
    total += v;
  }
  CHECK(total == doctest::Approx(1.0));

  // Beyond the last bin: dropped.
  voxel.mean = Eigen::Vector3d(31.0, 0.0, 0.0);
  const RawHistogram far = build_histogram({voxel}, Eigen::Vector3d::Zero(), cfg);
  CHECK(std::all_of(far.begin(), far.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("histogram matches a brute-force tally on a synthetic ring")
{
  // A flat ring of ground patches 5-8 m out.
  DescriptorConfig cfg;
  cfg.voxel_size = 1.0;
  std::mt19937_64 rng(47);
  std::normal_distribution<double> jitter(0.0, 0.02);
  PointCloud cloud;
  for (int i = 0; i < 14400; ++i) {
    const double angle = 2.0 * std::numbers::pi * (i % 360) / 360.0;
    const double radius = 5.0 + 3.0 * ((i / 360) % 40) / 40.0;
    cloud.points.emplace_back(
      radius * std::cos(angle) + jitter(rng), radius * std::sin(angle) + jitter(rng),
      jitter(rng));
  }
  const std::vector<NdtVoxel> voxels = build_voxels(cloud, cfg.voxel_size, cfg.min_points);
  const RawHistogram h = build_histogram(voxels, Eigen::Vector3d::Zero(), cfg, true);

  RawHistogram manual(90, 0.0);
  double count = 0.0;
  for (const NdtVoxel & v : voxels) {
    const int bin = static_cast<int>(std::floor(v.mean.norm() / cfg.range_bin));
    if (bin >= cfg.n_bins) {
      continue;
    }
    manual[bin * 9 + classify_voxel(v.covariance, cfg.classifier).label()] += 1.0;
    count += 1.0;
  }
  REQUIRE(count > 0.0);
  for (std::size_t i = 0; i < manual.size(); ++i) {
    CHECK(h[i] == doctest::Approx(manual[i] / count));
  }

  // Mass concentrated at bins 1-2 with planar as the dominant class (annulus
  // edge voxels catch thin arc slivers and classify linear).
  double planar_mass = 0.0;
  double bins12_mass = 0.0;
  double linear_mass = 0.0;
  double spherical_mass = 0.0;
  for (int bin = 1; bin <= 2; ++bin) {
    for (int sub = 0; sub < 3; ++sub) {
      linear_mass += h[bin * 9 + sub];
      planar_mass += h[bin * 9 + 3 + sub];
      spherical_mass += h[bin * 9 + 6 + sub];
    }
  }
  for (int bin = 1; bin <= 2; ++bin) {
    for (int cell = 0; cell < 9; ++cell) {
      bins12_mass += h[bin * 9 + cell];
    }
  }
  CHECK(bins12_mass > 0.99);
  CHECK(planar_mass > 0.6);
  CHECK(planar_mass > linear_mass);
  CHECK(planar_mass > spherical_mass);
}

TEST_CASE("pca on rank-1 data concentrates variance in one component")
{
  DescriptorConfig cfg;
  cfg.pca_dim = 10;
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(90);
  for (int i = 0; i < 90; ++i) {
    direction(i) = unit(rng);
  }
  direction.normalize();
  std::vector<RawHistogram> data;
  for (int i = 0; i < 40; ++i) {
    const double t = unit(rng) * 5.0;
    RawHistogram h(90);
    for (int c = 0; c < 90; ++c) {
      h[static_cast<std::size_t>(c)] = 0.5 + t * direction(c);
    }
    data.push_back(std::move(h));
  }
  const PcaModel model = fit_pca(data, cfg);
  CHECK(std::abs(std::abs(model.components.row(0).dot(direction)) - 1.0) < 1e-9);

  // Row orthonormality.
  const Eigen::MatrixXd gram = model.components * model.components.transpose();
  CHECK((gram - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-9);

  // The training mean maps to the zero descriptor.
  RawHistogram mean_hist(90);
  for (int c = 0; c < 90; ++c) {
    mean_hist[static_cast<std::size_t>(c)] = model.mean(c);
  }
  const EnvDescriptor zero = transform(model, mean_hist);
  for (double v : zero.values) {
    CHECK(std::abs(v) < 1e-9);
  }
}

TEST_CASE("pca reconstruction: full rank is exact, rank-3 needs 3 components")
{
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  DescriptorConfig full_cfg;
  full_cfg.pca_dim = 90;
  std::vector<RawHistogram> data;
  for (int i = 0; i < 95; ++i) {
    RawHistogram h(90);
    for (int c = 0; c < 90; ++c) {
      h[static_cast<std::size_t>(c)] = unit(rng);
    }
    data.push_back(std::move(h));
  }
  const PcaModel full = fit_pca(data, full_cfg);
  for (int i = 0; i < 5; ++i) {
    const Eigen::Map<const Eigen::VectorXd> x(data[static_cast<std::size_t>(i)].data(), 90);
    const Eigen::VectorXd projected = full.components * (x - full.mean);
    const Eigen::VectorXd rebuilt = full.components.transpose() * projected + full.mean;
    CHECK((rebuilt - x).cwiseAbs().maxCoeff() < 1e-9);
  }

  // Rank-3 data, D = 3: reconstruction exact, trailing eigenvalues vanish.
  Eigen::MatrixXd basis(3, 90);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 90; ++c) {
      basis(r, c) = unit(rng);
    }
  }
  std::vector<RawHistogram> rank3;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d coeff(unit(rng), unit(rng), unit(rng));
    const Eigen::VectorXd x = basis.transpose() * coeff;
    RawHistogram h(90);
    for (int c = 0; c < 90; ++c) {
      h[static_cast<std::size_t>(c)] = x(c);
    }
    rank3.push_back(std::move(h));
  }
  DescriptorConfig r3_cfg;
  r3_cfg.pca_dim = 3;
  const PcaModel m3 = fit_pca(rank3, r3_cfg);
  for (int i = 0; i < 5; ++i) {
    const Eigen::Map<const Eigen::VectorXd> x(rank3[static_cast<std::size_t>(i)].data(), 90);
    const Eigen::VectorXd rebuilt = m3.components.transpose() * (m3.components * (x - m3.mean)) + m3.mean;
    CHECK((rebuilt - x).cwiseAbs().maxCoeff() < 1e-8);
  }

  // Direct eigendecomposition oracle: eigenvalues beyond rank 3 are ~zero.
  Eigen::MatrixXd centered(50, 90);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(90);
  for (int i = 0; i < 50; ++i) {
    for (int c = 0; c < 90; ++c) {
      centered(i, c) = rank3[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
    mean += centered.row(i).transpose();
  }
  mean /= 50.0;
  centered.rowwise() -= mean.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered.transpose() * centered / 49.0);
  for (int i = 0; i < 87; ++i) {
    CHECK(std::abs(eig.eigenvalues()(i)) < 1e-12);
  }

  CHECK_THROWS(fit_pca(std::vector<RawHistogram>(5, RawHistogram(90, 0.0)), DescriptorConfig{}));
}

TEST_CASE("pca model JSON round trip preserves hash and transform")
{
  DescriptorConfig cfg;
  cfg.pca_dim = 4;
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<RawHistogram> data;
  for (int i = 0; i < 20; ++i) {
    RawHistogram h(90);
    for (int c = 0; c < 90; ++c) {
      h[static_cast<std::size_t>(c)] = unit(rng);
    }
    data.push_back(std::move(h));
  }
  const PcaModel model = fit_pca(data, cfg);
  const PcaModel back = PcaModel::from_json(model.to_json());
  CHECK(back.hash() == model.hash());
  const EnvDescriptor a = transform(model, data[0]);
  const EnvDescriptor b = transform(back, data[0]);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("extract handles the empty cloud")
{
  DescriptorConfig cfg;
  cfg.pca_dim = 2;
  std::vector<RawHistogram> data;
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    RawHistogram h(90);
    for (int c = 0; c < 90; ++c) {
      h[static_cast<std::size_t>(c)] = unit(rng);
    }
    data.push_back(std::move(h));
  }
  const PcaModel model = fit_pca(data, cfg);
  const EnvDescriptor d = extract(PointCloud{}, model);
  CHECK(d.values.size() == 2);
  const EnvDescriptor zero_hist = transform(model, RawHistogram(90, 0.0));
  CHECK(d.values == zero_hist.values);
}
