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

#include <optional>
#include <string>
#include <vector>

namespace adaptune {

/// Relative trajectory error of one fixed-length sub-trajectory.
struct RteSample {
  std::size_t frame = 0;       // start frame
  double length_m = 0.0;       // nominal sub-trajectory length
  double value_percent = 0.0;  // translational RTE
  double rotation_deg = 0.0;   // rotational discrepancy, logged but unused for tuning
};

/// Smallest j > i whose ground-truth arc length from i reaches L, or nullopt
/// when the sequence ends first.
std::optional<std::size_t> segment_end(const Trajectory & gt, std::size_t i, double length_m);

/// RTE of the sub-trajectory starting at frame i: the relative-pose
/// discrepancy between ground truth and estimate over the segment, as a
/// percentage of the ground-truth arc length. nullopt when no valid end
/// frame exists.
std::optional<RteSample> rte_at(
  const Trajectory & gt, const Trajectory & est, std::size_t i, double length_m);

/// One sample per frame that still has a full-length segment; other frames
/// are omitted. Throws std::invalid_argument on length mismatch.
std::vector<RteSample> per_frame_rtes(
  const Trajectory & gt, const Trajectory & est, double length_m);

/// Arithmetic mean of per_frame_rtes. Throws std::runtime_error when the
/// sequence is too short for a single sample.
double mean_rte(const Trajectory & gt, const Trajectory & est, double length_m);

/// KITTI-style score: RTEs for lengths 100..800 m over start frames taken at
/// the given stride, averaged over all valid (frame, length) pairs. Throws
/// std::runtime_error when no pair is valid.
double kitti_rte(const Trajectory & gt, const Trajectory & est, std::size_t frame_stride = 10);

/// CSV writer: "frame,length_m,rte_percent" rows.
void save_rte_csv(const std::vector<RteSample> & samples, const std::string & path);

}  // namespace adaptune
