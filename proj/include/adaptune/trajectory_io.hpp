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

#include <string>

namespace adaptune {

/// Trajectory file formats.
///  - Kitti: 12 whitespace-separated floats per line, row-major 3x4 [R|t].
///    Timestamps are not stored; loading synthesizes 0, 1, 2, ... seconds.
///  - Tum:   "timestamp tx ty tz qx qy qz qw" per line.
enum class TrajectoryFormat { kKitti, kTum };

/// Parses a trajectory file. Malformed lines raise std::runtime_error naming
/// the line; near-orthonormal rotations are projected to the nearest rotation
/// with a warning, grossly invalid ones are rejected.
Trajectory load_trajectory(const std::string & path, TrajectoryFormat format);

void save_trajectory(const Trajectory & t, const std::string & path, TrajectoryFormat format);

/// Sequence directory layout:
///   poses.txt         ground truth, KITTI format
///   times.txt         one float (seconds) per line
///   frame_%06d.xyz    ASCII point cloud, one "x y z" per line
///   envs.txt          optional, one environment label per frame
Sequence load_sequence(const std::string & dir);

void save_sequence(const Sequence & seq, const std::string & dir);

PointCloud load_xyz(const std::string & path);
void save_xyz(const PointCloud & cloud, const std::string & path);

}  // namespace adaptune
