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

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adaptune::sim {

/// Lateral surface of a finite cylinder with axis p0 -> p1.
struct Cylinder {
  Eigen::Vector3d p0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d p1 = Eigen::Vector3d::Zero();
  double radius = 1.0;
};

/// Axis-aligned box.
struct Box {
  Eigen::Vector3d lo = Eigen::Vector3d::Zero();
  Eigen::Vector3d hi = Eigen::Vector3d::Zero();
};

/// Ground as a grid of square tiles with deterministic per-tile height and
/// slope jitter. A perfectly flat plane reflects a spinning LiDAR's ring
/// pattern, which is locked to the sensor, and scan matching slides along it;
/// gentle world-anchored relief breaks that.
struct TiledGround {
  double x0 = 0.0, x1 = 0.0;  // covered rectangle
  double y0 = 0.0, y1 = 0.0;
  double base_z = 0.0;
  double tile = 2.5;        // tile edge length, meters
  double amplitude = 0.05;  // max |height offset| at the tile center
  double max_slope = 0.06;  // max |dz/dx|, |dz/dy| within a tile
  std::uint64_t seed = 0;
  double origin_x = 0.0;  // tile lattice anchor, kept aligned under translation
  double origin_y = 0.0;

  double height_at(double x, double y) const;
};

enum class WorldKind { kCave, kOpen, kStreet };

std::string to_string(WorldKind kind);
WorldKind world_kind_from_string(const std::string & s);

/// Procedural environment: a bag of exact-intersection primitives occupying
/// x in [x_offset, x_offset + extent_x], plus a recommended sensor path
/// through it at sensor height.
struct WorldModel {
  WorldKind kind = WorldKind::kOpen;
  std::uint64_t seed = 0;
  std::vector<Cylinder> cylinders;
  std::vector<Box> boxes;
  std::vector<TiledGround> grounds;
  double extent_x = 0.0;
  double x_offset = 0.0;
  std::vector<Eigen::Vector3d> path;
};

/// Deterministic geometry for (kind, seed):
///  - cave:   3 m-radius tunnel with jittered rings, gently curving axis
///  - open:   ground plane plus up to 5 scattered pillars
///  - street: ground plane plus two facade rows 8-14 m apart
WorldModel generate_world(WorldKind kind, std::uint64_t seed);

void translate_world(WorldModel & world, const Eigen::Vector3d & offset);

/// Nearest intersection distance along the ray, or nullopt when nothing is
/// hit within max_range. `dir` must be unit length.
std::optional<double> raycast(
  const WorldModel & world, const Eigen::Vector3d & origin, const Eigen::Vector3d & dir,
  double max_range);

std::optional<double> raycast_cylinder(
  const Cylinder & c, const Eigen::Vector3d & origin, const Eigen::Vector3d & dir);
std::optional<double> raycast_box(
  const Box & b, const Eigen::Vector3d & origin, const Eigen::Vector3d & dir);
std::optional<double> raycast_ground(
  const TiledGround & g, const Eigen::Vector3d & origin, const Eigen::Vector3d & dir,
  double max_range);

/// Several worlds chained along +x, e.g. cave -> open -> street.
struct CompositeWorld {
  std::vector<WorldModel> worlds;

  static CompositeWorld chain(const std::vector<WorldKind> & kinds, std::uint64_t seed);
  static CompositeWorld single(WorldKind kind, std::uint64_t seed);

  std::optional<double> cast(
    const Eigen::Vector3d & origin, const Eigen::Vector3d & dir, double max_range) const;

  /// Concatenation of the member worlds' recommended paths.
  std::vector<Eigen::Vector3d> default_path() const;

  /// Environment label (world kind) owning the given x coordinate; positions
  /// outside every world clamp to the nearest one.
  std::string kind_at(double x) const;

  double total_extent() const;
};

}  // namespace adaptune::sim
