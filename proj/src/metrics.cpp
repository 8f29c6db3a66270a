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

#include "adaptune/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace adaptune {

std::optional<std::size_t> segment_end(const Trajectory & gt, std::size_t i, double length_m)
{
  if (i >= gt.size()) {
    throw std::out_of_range("segment_end: start frame out of range");
  }
  double acc = 0.0;
  for (std::size_t j = i + 1; j < gt.size(); ++j) {
    acc += (gt.poses[j].translation - gt.poses[j - 1].translation).norm();
    if (acc >= length_m) {
      return j;
    }
  }
  return std::nullopt;
}

std::optional<RteSample> rte_at(
  const Trajectory & gt, const Trajectory & est, std::size_t i, double length_m)
{
  if (gt.size() != est.size()) {
    throw std::invalid_argument("rte_at: trajectory lengths differ");
  }
  const std::optional<std::size_t> end = segment_end(gt, i, length_m);
  if (!end) {
    return std::nullopt;
  }
  const std::size_t j = *end;
  const Pose gt_rel = relative(gt.poses[i], gt.poses[j]);
  const Pose est_rel = relative(est.poses[i], est.poses[j]);
  const Pose delta = relative(gt_rel, est_rel);
  const double travelled = arc_length(gt, i, j);
  RteSample sample;
  sample.frame = i;
  sample.length_m = length_m;
  sample.value_percent = 100.0 * delta.translation.norm() / travelled;
  sample.rotation_deg = rotation_angle(delta) * 180.0 / std::numbers::pi;
  return sample;
}

std::vector<RteSample> per_frame_rtes(
  const Trajectory & gt, const Trajectory & est, double length_m)
{
  if (gt.size() != est.size()) {
    throw std::invalid_argument("per_frame_rtes: trajectory lengths differ");
  }
  std::vector<RteSample> samples;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const std::optional<RteSample> s = rte_at(gt, est, i, length_m);
    if (!s) {
      break;  // later frames have even less remaining arc length
    }
    samples.push_back(*s);
  }
  return samples;
}

double mean_rte(const Trajectory & gt, const Trajectory & est, double length_m)
{
  const std::vector<RteSample> samples = per_frame_rtes(gt, est, length_m);
  if (samples.empty()) {
    throw std::runtime_error("mean_rte: sequence shorter than the sub-trajectory length");
  }
  double acc = 0.0;
  for (const RteSample & s : samples) {
    acc += s.value_percent;
  }
  return acc / static_cast<double>(samples.size());
}

double kitti_rte(const Trajectory & gt, const Trajectory & est, std::size_t frame_stride)
{
  if (gt.size() != est.size()) {
    throw std::invalid_argument("kitti_rte: trajectory lengths differ");
  }
  if (frame_stride == 0) {
    throw std::invalid_argument("kitti_rte: stride must be >= 1");
  }
  double acc = 0.0;
  std::size_t count = 0;
  for (int length = 100; length <= 800; length += 100) {
    for (std::size_t i = 0; i < gt.size(); i += frame_stride) {
      const std::optional<RteSample> s = rte_at(gt, est, i, static_cast<double>(length));
      if (!s) {
        break;
      }
      acc += s->value_percent;
      ++count;
    }
  }
  if (count == 0) {
    throw std::runtime_error("kitti_rte: no valid (frame, length) pair; path too short");
  }
  return acc / static_cast<double>(count);
}

void save_rte_csv(const std::vector<RteSample> & samples, const std::string & path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << "frame,length_m,rte_percent\n";
  char buf[96];
  for (const RteSample & s : samples) {
    std::snprintf(
      buf, sizeof(buf), "%zu,%.3f,%.9g\n", s.frame, s.length_m, s.value_percent);
    out << buf;
  }
}

}  // namespace adaptune
