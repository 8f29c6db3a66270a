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

#include "adaptune/trajectory_io.hpp"

#include "adaptune/logging.hpp"

#include <Eigen/Geometry>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fs = std::filesystem;

namespace adaptune {

namespace {

std::vector<double> parse_floats(const std::string & line)
{
  std::istringstream iss(line);
  std::vector<double> values;
  double v = 0.0;
  while (iss >> v) {
    values.push_back(v);
  }
  std::string trailing;
  if (iss.clear(), iss >> trailing) {
    throw std::runtime_error("unexpected token '" + trailing + "'");
  }
  return values;
}

bool is_blank(const std::string & line)
{
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

Eigen::Matrix3d sanitize_rotation(const Eigen::Matrix3d & raw, const std::string & where)
{
  if (is_rotation(raw, 1e-9)) {
    return raw;
  }
  const Eigen::Matrix3d gram = raw * raw.transpose();
  const double err = (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (err > 1e-2 || !raw.allFinite()) {
    throw std::runtime_error(where + ": rotation is not orthonormal (error " + std::to_string(err) + ")");
  }
  if (err > 1e-6) {
    log::warn(where, ": re-orthonormalizing rotation (error ", err, ")");
  }
  return project_to_rotation(raw);
}

std::string frame_filename(std::size_t index)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu.xyz", index);
  return buf;
}

std::ofstream open_for_write(const std::string & path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  return out;
}

void write_double(std::ofstream & out, double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

Trajectory load_trajectory(const std::string & path, TrajectoryFormat format)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trajectory file '" + path + "'");
  }
  Trajectory t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line) || line[0] == '#') {
      continue;
    }
    const std::string where = path + ":" + std::to_string(line_no);
    std::vector<double> v;
    try {
      v = parse_floats(line);
    } catch (const std::exception & e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    Pose pose;
    double stamp = 0.0;
    if (format == TrajectoryFormat::kKitti) {
      if (v.size() != 12) {
        throw std::runtime_error(
          where + ": expected 12 values for a KITTI pose, got " + std::to_string(v.size()));
      }
      Eigen::Matrix3d r;
      r << v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10];
      pose.rotation = sanitize_rotation(r, where);
      pose.translation = Eigen::Vector3d(v[3], v[7], v[11]);
      stamp = static_cast<double>(t.size());
    } else {
      if (v.size() != 8) {
        throw std::runtime_error(
          where + ": expected 8 values for a TUM pose, got " + std::to_string(v.size()));
      }
      stamp = v[0];
      pose.translation = Eigen::Vector3d(v[1], v[2], v[3]);
      Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);  // (w, x, y, z)
      if (q.norm() < 1e-6) {
        throw std::runtime_error(where + ": quaternion has near-zero norm");
      }
      if (std::abs(q.norm() - 1.0) > 1e-6) {
        log::warn(where, ": normalizing quaternion (norm ", q.norm(), ")");
      }
      q.normalize();
      pose.rotation = q.toRotationMatrix();
    }
    t.poses.push_back(pose);
    t.timestamps.push_back(stamp);
  }
  t.validate();
  return t;
}

void save_trajectory(const Trajectory & t, const std::string & path, TrajectoryFormat format)
{
  t.validate();
  std::ofstream out = open_for_write(path);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Pose & p = t.poses[i];
    if (format == TrajectoryFormat::kKitti) {
      for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
          write_double(out, p.rotation(row, col));
          out << ' ';
        }
        write_double(out, p.translation(row));
        out << (row == 2 ? "" : " ");
      }
      out << '\n';
    } else {
      const Eigen::Quaterniond q(p.rotation);
      write_double(out, t.timestamps[i]);
      for (double v : {p.translation.x(), p.translation.y(), p.translation.z(), q.x(), q.y(), q.z(), q.w()}) {
        out << ' ';
        write_double(out, v);
      }
      out << '\n';
    }
  }
}

PointCloud load_xyz(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open point cloud file '" + path + "'");
  }
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line) || line[0] == '#') {
      continue;
    }
    std::vector<double> v;
    try {
      v = parse_floats(line);
    } catch (const std::exception & e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (v.size() != 3) {
      throw std::runtime_error(
        path + ":" + std::to_string(line_no) + ": expected 3 values, got " +
        std::to_string(v.size()));
    }
    cloud.points.emplace_back(v[0], v[1], v[2]);
  }
  if (!cloud.all_finite()) {
    throw std::runtime_error(path + ": point cloud contains non-finite coordinates");
  }
  return cloud;
}

void save_xyz(const PointCloud & cloud, const std::string & path)
{
  std::ofstream out = open_for_write(path);
  char buf[96];
  for (const Eigen::Vector3d & p : cloud.points) {
    std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", p.x(), p.y(), p.z());
    out << buf;
  }
}

Sequence load_sequence(const std::string & dir)
{
  const fs::path root(dir);
  if (!fs::is_directory(root)) {
    throw std::runtime_error("sequence directory '" + dir + "' does not exist");
  }
  Sequence seq;
  seq.id = root.filename().string();
  if (seq.id.empty()) {
    seq.id = root.parent_path().filename().string();
  }
  seq.source_dir = dir;
  seq.gt = load_trajectory((root / "poses.txt").string(), TrajectoryFormat::kKitti);

  const fs::path times_path = root / "times.txt";
  if (!fs::exists(times_path)) {
    throw std::runtime_error("sequence '" + dir + "' is missing times.txt");
  }
  std::ifstream times_in(times_path);
  std::vector<double> times;
  double v = 0.0;
  while (times_in >> v) {
    times.push_back(v);
  }
  if (times.size() != seq.gt.size()) {
    throw std::runtime_error(
      "sequence '" + dir + "': " + std::to_string(times.size()) + " timestamps but " +
      std::to_string(seq.gt.size()) + " poses");
  }
  seq.gt.timestamps = times;
  seq.gt.validate();

  std::size_t frame_count = 0;
  while (fs::exists(root / frame_filename(frame_count))) {
    ++frame_count;
  }
  if (frame_count != seq.gt.size()) {
    throw std::runtime_error(
      "sequence '" + dir + "': " + std::to_string(frame_count) + " frame files but " +
      std::to_string(seq.gt.size()) + " poses");
  }
  seq.frames.reserve(frame_count);
  for (std::size_t i = 0; i < frame_count; ++i) {
    seq.frames.push_back(load_xyz((root / frame_filename(i)).string()));
  }

  const fs::path envs_path = root / "envs.txt";
  if (fs::exists(envs_path)) {
    std::ifstream envs_in(envs_path);
    std::string label;
    while (envs_in >> label) {
      seq.frame_labels.push_back(label);
    }
    if (seq.frame_labels.size() != frame_count) {
      throw std::runtime_error(
        "sequence '" + dir + "': " + std::to_string(seq.frame_labels.size()) +
        " environment labels but " + std::to_string(frame_count) + " frames");
    }
  }
  seq.validate();
  return seq;
}

void save_sequence(const Sequence & seq, const std::string & dir)
{
  seq.validate();
  const fs::path root(dir);
  fs::create_directories(root);
  save_trajectory(seq.gt, (root / "poses.txt").string(), TrajectoryFormat::kKitti);
  {
    std::ofstream out = open_for_write((root / "times.txt").string());
    char buf[48];
    for (double t : seq.gt.timestamps) {
      std::snprintf(buf, sizeof(buf), "%.9f\n", t);
      out << buf;
    }
  }
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    save_xyz(seq.frames[i], (root / frame_filename(i)).string());
  }
  if (!seq.frame_labels.empty()) {
    std::ofstream out = open_for_write((root / "envs.txt").string());
    for (const std::string & label : seq.frame_labels) {
      out << label << '\n';
    }
  }
}

}  // namespace adaptune
