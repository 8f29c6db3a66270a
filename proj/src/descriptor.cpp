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

#include "adaptune/logging.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace adaptune {

namespace {

// 21 bits per signed cell coordinate packed into one 64-bit key.
std::int64_t cell_key(int x, int y, int z)
{
  constexpr std::int64_t kOffset = 1 << 20;
  constexpr std::int64_t kSpan = 1 << 21;
  return ((static_cast<std::int64_t>(x) + kOffset) * kSpan +
          (static_cast<std::int64_t>(y) + kOffset)) *
           kSpan +
         (static_cast<std::int64_t>(z) + kOffset);
}

int cell_coord(double v, double voxel_size)
{
  return static_cast<int>(std::floor(v / voxel_size));
}

struct Accumulator {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  Eigen::Matrix3d outer = Eigen::Matrix3d::Zero();
  int count = 0;
};

double tilt_from_vertical_deg(const Eigen::Vector3d & axis)
{
  const double c = std::clamp(std::abs(axis.normalized().z()), 0.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

int bin_edges2(double value, const std::array<double, 2> & edges)
{
  if (value < edges[0]) {
    return 0;
  }
  return value < edges[1] ? 1 : 2;
}

}  // namespace

std::vector<NdtVoxel> build_voxels(const PointCloud & cloud, double voxel_size, int min_points)
{
  if (!(voxel_size > 0.0)) {
    throw std::invalid_argument("build_voxels: voxel_size must be > 0");
  }
  if (min_points < 3) {
    throw std::invalid_argument("build_voxels: min_points must be >= 3");
  }
  std::unordered_map<std::int64_t, Accumulator> cells;
  cells.reserve(cloud.size() / 4 + 1);
  for (const Eigen::Vector3d & p : cloud.points) {
    if (!p.allFinite()) {
      throw std::invalid_argument("build_voxels: non-finite point coordinate");
    }
    const std::int64_t key = cell_key(
      cell_coord(p.x(), voxel_size), cell_coord(p.y(), voxel_size),
      cell_coord(p.z(), voxel_size));
    Accumulator & acc = cells[key];
    acc.sum += p;
    acc.outer += p * p.transpose();
    ++acc.count;
  }

  std::vector<std::pair<std::int64_t, const Accumulator *>> ordered;
  ordered.reserve(cells.size());
  for (const auto & [key, acc] : cells) {
    if (acc.count >= min_points) {
      ordered.emplace_back(key, &acc);
    }
  }
  std::sort(ordered.begin(), ordered.end(), [](const auto & a, const auto & b) {
    return a.first < b.first;
  });

  std::vector<NdtVoxel> voxels;
  voxels.reserve(ordered.size());
  for (const auto & [key, acc] : ordered) {
    NdtVoxel voxel;
    const double n = static_cast<double>(acc->count);
    voxel.count = acc->count;
    voxel.mean = acc->sum / n;
    Eigen::Matrix3d cov =
      (acc->outer - acc->sum * voxel.mean.transpose()) / (n - 1.0);
    voxel.covariance = 0.5 * (cov + cov.transpose());  // enforce symmetry
    voxels.push_back(std::move(voxel));
  }
  return voxels;
}

VoxelClass classify_voxel(const Eigen::Matrix3d & covariance, const ClassifierConfig & cfg)
{
  if (!covariance.allFinite()) {
    throw std::invalid_argument("classify_voxel: non-finite covariance");
  }
  if (!(cfg.eigen_ratio_threshold > 0.0 && cfg.eigen_ratio_threshold < 1.0)) {
    throw std::invalid_argument("classify_voxel: t_e must be in (0,1)");
  }
  const Eigen::Matrix3d sym = 0.5 * (covariance + covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(sym);
  // Eigen sorts ascending; we want l1 >= l2 >= l3.
  const double l1 = std::max(eig.eigenvalues()(2), 0.0);
  const double l2 = std::max(eig.eigenvalues()(1), 0.0);
  const double l3 = std::max(eig.eigenvalues()(0), 0.0);
  const Eigen::Vector3d dominant = eig.eigenvectors().col(2);
  const Eigen::Vector3d normal = eig.eigenvectors().col(0);

  VoxelClass out;
  if (l1 <= 0.0) {
    out.shape = ShapeClass::kSpherical;
    out.subclass = 0;
    return out;
  }
  if (l2 / l1 < cfg.eigen_ratio_threshold) {
    out.shape = ShapeClass::kLinear;
    out.subclass = bin_edges2(tilt_from_vertical_deg(dominant), cfg.tilt_edges_deg);
    return out;
  }
  if (l2 > 0.0 && l3 / l2 < cfg.eigen_ratio_threshold) {
    out.shape = ShapeClass::kPlanar;
    out.subclass = bin_edges2(tilt_from_vertical_deg(normal), cfg.tilt_edges_deg);
    return out;
  }
  out.shape = ShapeClass::kSpherical;
  out.subclass = l2 > 0.0 ? bin_edges2(l1 / l2, cfg.sphere_ratio_edges) : 0;
  return out;
}

void DescriptorConfig::validate() const
{
  if (!(voxel_size > 0.0)) {
    throw std::invalid_argument("descriptor: voxel_size must be > 0");
  }
  if (min_points < 3) {
    throw std::invalid_argument("descriptor: min_points must be >= 3");
  }
  if (!(range_bin > 0.0) || n_bins < 1) {
    throw std::invalid_argument("descriptor: invalid range binning");
  }
  if (pca_dim < 1 || pca_dim > histogram_size()) {
    throw std::invalid_argument("descriptor: pca_dim out of range");
  }
  if (!(classifier.eigen_ratio_threshold > 0.0 && classifier.eigen_ratio_threshold < 1.0)) {
    throw std::invalid_argument("descriptor: t_e must be in (0,1)");
  }
}

nlohmann::json DescriptorConfig::to_json() const
{
  nlohmann::json j;
  j["voxel_size"] = voxel_size;
  j["min_points"] = min_points;
  j["range_bin"] = range_bin;
  j["n_bins"] = n_bins;
  j["t_e"] = classifier.eigen_ratio_threshold;
  j["tilt_edges_deg"] = classifier.tilt_edges_deg;
  j["sphere_ratio_edges"] = classifier.sphere_ratio_edges;
  j["pca_dim"] = pca_dim;
  return j;
}

DescriptorConfig DescriptorConfig::from_json(const nlohmann::json & j)
{
  DescriptorConfig cfg;
  cfg.voxel_size = j.at("voxel_size").get<double>();
  cfg.min_points = j.at("min_points").get<int>();
  cfg.range_bin = j.at("range_bin").get<double>();
  cfg.n_bins = j.at("n_bins").get<int>();
  cfg.classifier.eigen_ratio_threshold = j.at("t_e").get<double>();
  cfg.classifier.tilt_edges_deg = j.at("tilt_edges_deg").get<std::array<double, 2>>();
  cfg.classifier.sphere_ratio_edges = j.at("sphere_ratio_edges").get<std::array<double, 2>>();
  cfg.pca_dim = j.at("pca_dim").get<int>();
  cfg.validate();
  return cfg;
}

RawHistogram build_histogram(
  const std::vector<NdtVoxel> & voxels, const Eigen::Vector3d & sensor_origin,
  const DescriptorConfig & cfg, bool normalize)
{
  cfg.validate();
  RawHistogram hist(static_cast<std::size_t>(cfg.histogram_size()), 0.0);
  for (const NdtVoxel & voxel : voxels) {
    const double dist = (voxel.mean - sensor_origin).norm();
    const int bin = static_cast<int>(std::floor(dist / cfg.range_bin));
    if (bin < 0 || bin >= cfg.n_bins) {
      continue;
    }
    const VoxelClass cls = classify_voxel(voxel.covariance, cfg.classifier);
    hist[static_cast<std::size_t>(bin * 9 + cls.label())] += 1.0;
  }
  if (normalize) {
    double total = 0.0;
    for (double v : hist) {
      total += v;
    }
    if (total > 0.0) {
      for (double & v : hist) {
        v /= total;
      }
    }
  }
  return hist;
}

RawHistogram compute_histogram(const PointCloud & cloud, const DescriptorConfig & cfg)
{
  const std::vector<NdtVoxel> voxels = build_voxels(cloud, cfg.voxel_size, cfg.min_points);
  return build_histogram(voxels, Eigen::Vector3d::Zero(), cfg);
}

PcaModel fit_pca(const std::vector<RawHistogram> & histograms, const DescriptorConfig & cfg)
{
  cfg.validate();
  const int dim = cfg.histogram_size();
  const int d_out = cfg.pca_dim;
  if (static_cast<int>(histograms.size()) < d_out) {
    throw std::invalid_argument(
      "fit_pca: need at least " + std::to_string(d_out) + " histograms, got " +
      std::to_string(histograms.size()));
  }
  const std::size_t n = histograms.size();
  Eigen::MatrixXd data(static_cast<Eigen::Index>(n), dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<int>(histograms[i].size()) != dim) {
      throw std::invalid_argument("fit_pca: histogram size mismatch");
    }
    for (int c = 0; c < dim; ++c) {
      data(static_cast<Eigen::Index>(i), c) = histograms[i][static_cast<std::size_t>(c)];
    }
  }
  PcaModel model;
  model.config = cfg;
  model.mean = data.colwise().mean();
  data.rowwise() -= model.mean.transpose();
  const Eigen::MatrixXd cov =
    data.transpose() * data / static_cast<double>(std::max<std::size_t>(n - 1, 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  model.components.resize(d_out, dim);
  for (int r = 0; r < d_out; ++r) {
    Eigen::VectorXd v = eig.eigenvectors().col(dim - 1 - r);  // descending eigenvalue
    Eigen::Index max_idx = 0;
    v.cwiseAbs().maxCoeff(&max_idx);
    if (v(max_idx) < 0.0) {
      v = -v;
    }
    model.components.row(r) = v.transpose();
  }
  return model;
}

nlohmann::json PcaModel::to_json() const
{
  nlohmann::json j;
  j["format"] = "adaptune.pca.v1";
  j["dim"] = dim();
  j["descriptor"] = config.to_json();
  j["mean"] = std::vector<double>(mean.data(), mean.data() + mean.size());
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < components.rows(); ++r) {
    std::vector<double> row(components.cols());
    for (int c = 0; c < components.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = components(r, c);
    }
    rows.push_back(row);
  }
  j["components"] = std::move(rows);
  return j;
}

PcaModel PcaModel::from_json(const nlohmann::json & j)
{
  if (j.value("format", "") != "adaptune.pca.v1") {
    throw std::runtime_error("pca model: unknown format tag");
  }
  PcaModel model;
  model.config = DescriptorConfig::from_json(j.at("descriptor"));
  const std::vector<double> mean = j.at("mean").get<std::vector<double>>();
  model.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  const auto & rows = j.at("components");
  const int d_out = static_cast<int>(rows.size());
  if (d_out < 1) {
    throw std::runtime_error("pca model: empty component list");
  }
  model.components.resize(d_out, model.mean.size());
  for (int r = 0; r < d_out; ++r) {
    const std::vector<double> row = rows.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != model.mean.size()) {
      throw std::runtime_error("pca model: component row size mismatch");
    }
    for (Eigen::Index c = 0; c < model.mean.size(); ++c) {
      model.components(r, c) = row[static_cast<std::size_t>(c)];
    }
  }
  return model;
}

void PcaModel::save(const std::string & path) const
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << to_json().dump(2) << '\n';
}

PcaModel PcaModel::load(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open pca model '" + path + "'");
  }
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

std::string PcaModel::hash() const
{
  const std::string payload = to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

EnvDescriptor transform(const PcaModel & pca, const RawHistogram & histogram)
{
  if (static_cast<Eigen::Index>(histogram.size()) != pca.mean.size()) {
    throw std::invalid_argument("transform: histogram size mismatch");
  }
  const Eigen::Map<const Eigen::VectorXd> h(
    histogram.data(), static_cast<Eigen::Index>(histogram.size()));
  const Eigen::VectorXd projected = pca.components * (h - pca.mean);
  EnvDescriptor out;
  out.values.assign(projected.data(), projected.data() + projected.size());
  return out;
}

EnvDescriptor extract(const PointCloud & cloud, const PcaModel & pca)
{
  if (cloud.empty()) {
    log::info("extract: empty cloud, descriptor falls back to the zero histogram");
    return transform(pca, RawHistogram(static_cast<std::size_t>(pca.mean.size()), 0.0));
  }
  return transform(pca, compute_histogram(cloud, pca.config));
}

}  // namespace adaptune
