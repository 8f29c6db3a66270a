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

#include "adaptune/sim/world.hpp"

#include "adaptune/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace adaptune::sim {

namespace {

constexpr double kSensorHeight = 1.6;
constexpr double kRayEps = 1e-6;

double uniform(std::mt19937_64 & rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double tile_jitter(std::int64_t ix, std::int64_t iy, std::uint64_t seed)
{
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  h ^= static_cast<std::uint64_t>(ix) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 30)) * 0x94d049bb133111ebULL;
  h ^= static_cast<std::uint64_t>(iy) * 0xd6e8feb86659fd93ULL;
  h = (h ^ (h >> 27)) * 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 31;
  // Map to [-1, 1].
  return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
}

TiledGround make_ground(
  double x0, double x1, double y0, double y1, std::uint64_t seed)
{
  TiledGround g;
  g.x0 = x0;
  g.x1 = x1;
  g.y0 = y0;
  g.y1 = y1;
  g.seed = seed;
  return g;
}

WorldModel make_cave(std::uint64_t seed)
{
  WorldModel w;
  w.kind = WorldKind::kCave;
  w.seed = seed;
  w.extent_x = 60.0;
  std::mt19937_64 rng(derive_seed(seed, "cave"));

  // A twisty passage: heading swings up to ~45 degrees within a few meters,
  // plus mild vertical undulation. A keyframe more than a bend behind loses
  // most of its overlap, which is what makes long keyframe intervals unstable
  // here.
  const double amplitude = uniform(rng, 2.2, 3.2);
  const double period = uniform(rng, 14.0, 20.0);
  const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double z_amplitude = uniform(rng, 0.5, 1.0);
  const double z_period = uniform(rng, 22.0, 34.0);
  const double z_phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double segment_len = 1.5;

  // Vertices carry a small shared jitter and each ring segment a jittered
  // radius, which gives the tunnel the axial texture scan matching locks
  // onto.
  std::vector<Eigen::Vector3d> nominal;
  std::vector<Eigen::Vector3d> jittered;
  for (double x = 0.0; x <= w.extent_x + 1e-9; x += segment_len) {
    const double y = amplitude * std::sin(2.0 * std::numbers::pi * x / period + phase);
    const double z =
      kSensorHeight + z_amplitude * std::sin(2.0 * std::numbers::pi * x / z_period + z_phase);
    nominal.emplace_back(x, y, z);
    jittered.emplace_back(
      x, y + uniform(rng, -0.25, 0.25), z + uniform(rng, -0.25, 0.25));
  }
  for (std::size_t i = 0; i + 1 < jittered.size(); ++i) {
    Cylinder c;
    const Eigen::Vector3d axis = (jittered[i + 1] - jittered[i]).normalized();
    c.p0 = jittered[i] - 0.3 * axis;  // overlap rings so bends stay sealed
    c.p1 = jittered[i + 1] + 0.3 * axis;
    c.radius = uniform(rng, 2.6, 3.2);
    w.cylinders.push_back(c);
  }
  w.path = nominal;
  return w;
}

void scatter_ground_clutter(
  WorldModel & w, std::mt19937_64 & rng, int count, double lateral_min, double lateral_max)
{
  // Low rocks/bushes/debris. Smooth flat ground gives a spinning LiDAR only
  // sensor-locked ring curves, which scan matching can lock onto instead of
  // the world; grounded clutter anchors the scans.
  for (int i = 0; i < count; ++i) {
    const double along = uniform(rng, 0.0, w.extent_x);
    double lateral = uniform(rng, lateral_min, lateral_max);
    if (uniform(rng, 0.0, 1.0) < 0.5) {
      lateral = -lateral;
    }
    Box rock;
    const double sx = uniform(rng, 0.2, 0.6);
    const double sy = uniform(rng, 0.2, 0.6);
    const double sz = uniform(rng, 0.15, 0.5);
    rock.lo = Eigen::Vector3d(along - sx / 2.0, lateral - sy / 2.0, 0.0);
    rock.hi = Eigen::Vector3d(along + sx / 2.0, lateral + sy / 2.0, sz);
    w.boxes.push_back(rock);
  }
}

WorldModel make_open(std::uint64_t seed)
{
  WorldModel w;
  w.kind = WorldKind::kOpen;
  w.seed = seed;
  w.extent_x = 80.0;
  std::mt19937_64 rng(derive_seed(seed, "open"));

  w.grounds.push_back(
    make_ground(-2.0, w.extent_x + 2.0, -80.0, 80.0, derive_seed(seed, "ground")));

  const int n_pillars = 5;
  for (int i = 0; i < n_pillars; ++i) {
    const double along = uniform(rng, 5.0, w.extent_x - 5.0);
    double lateral = uniform(rng, 4.0, 30.0);
    if (uniform(rng, 0.0, 1.0) < 0.5) {
      lateral = -lateral;
    }
    Cylinder pillar;
    pillar.p0 = Eigen::Vector3d(along, lateral, 0.0);
    pillar.p1 = Eigen::Vector3d(along, lateral, uniform(rng, 3.0, 8.0));
    pillar.radius = uniform(rng, 0.4, 1.2);
    w.cylinders.push_back(pillar);
  }
  scatter_ground_clutter(w, rng, 60, 1.5, 35.0);
  w.path = {
    Eigen::Vector3d(0.0, 0.0, kSensorHeight), Eigen::Vector3d(w.extent_x, 0.0, kSensorHeight)};
  return w;
}

WorldModel make_street(std::uint64_t seed)
{
  WorldModel w;
  w.kind = WorldKind::kStreet;
  w.seed = seed;
  w.extent_x = 80.0;
  std::mt19937_64 rng(derive_seed(seed, "street"));

  w.grounds.push_back(
    make_ground(-2.0, w.extent_x + 2.0, -80.0, 80.0, derive_seed(seed, "ground")));

  // Two facade rows; inner walls sit 4..7 m off the centerline, so the rows
  // are 8..14 m apart.
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    double cursor = uniform(rng, -4.0, 0.0);
    while (cursor < w.extent_x) {
      const double length = uniform(rng, 8.0, 14.0);
      const double inner = uniform(rng, 4.0, 7.0);
      const double depth = uniform(rng, 3.0, 6.0);
      const double height = uniform(rng, 4.0, 9.0);
      Box b;
      const double y0 = sign * inner;
      const double y1 = sign * (inner + depth);
      b.lo = Eigen::Vector3d(cursor, std::min(y0, y1), 0.0);
      b.hi = Eigen::Vector3d(cursor + length, std::max(y0, y1), height);
      w.boxes.push_back(b);
      cursor += length + uniform(rng, 1.0, 3.0);
    }
  }

  // Sidewalk clutter: lamp posts and parked boxes. A bare corridor of smooth
  // facades constrains nothing along the street axis; scan matching needs
  // this longitudinal texture, as real streets provide.
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    double cursor = uniform(rng, 1.0, 4.0);
    while (cursor < w.extent_x) {
      Cylinder pole;
      const double lateral = sign * uniform(rng, 2.8, 3.8);
      pole.p0 = Eigen::Vector3d(cursor, lateral, 0.0);
      pole.p1 = Eigen::Vector3d(cursor, lateral, uniform(rng, 3.0, 6.0));
      pole.radius = uniform(rng, 0.1, 0.25);
      w.cylinders.push_back(pole);
      cursor += uniform(rng, 5.0, 9.0);
    }
    double car_cursor = uniform(rng, 2.0, 12.0);
    while (car_cursor < w.extent_x) {
      if (uniform(rng, 0.0, 1.0) < 0.7) {
        Box car;
        const double inner_edge = sign * uniform(rng, 2.0, 2.6);
        const double length = uniform(rng, 4.0, 5.0);
        const double y0 = inner_edge;
        const double y1 = inner_edge + sign * 1.8;
        car.lo = Eigen::Vector3d(car_cursor, std::min(y0, y1), 0.0);
        car.hi =
          Eigen::Vector3d(car_cursor + length, std::max(y0, y1), uniform(rng, 1.4, 1.7));
        w.boxes.push_back(car);
      }
      car_cursor += uniform(rng, 12.0, 20.0);
    }
  }
  scatter_ground_clutter(w, rng, 40, 0.8, 3.6);
  w.path = {
    Eigen::Vector3d(0.0, 0.0, kSensorHeight), Eigen::Vector3d(w.extent_x, 0.0, kSensorHeight)};
  return w;
}

}  // namespace

std::string to_string(WorldKind kind)
{
  switch (kind) {
    case WorldKind::kCave:
      return "cave";
    case WorldKind::kOpen:
      return "open";
    default:
      return "street";
  }
}

WorldKind world_kind_from_string(const std::string & s)
{
  if (s == "cave") return WorldKind::kCave;
  if (s == "open") return WorldKind::kOpen;
  if (s == "street") return WorldKind::kStreet;
  throw std::invalid_argument("unknown world kind '" + s + "'");
}

WorldModel generate_world(WorldKind kind, std::uint64_t seed)
{
  switch (kind) {
    case WorldKind::kCave:
      return make_cave(seed);
    case WorldKind::kOpen:
      return make_open(seed);
    default:
      return make_street(seed);
  }
}

void translate_world(WorldModel & world, const Eigen::Vector3d & offset)
{
  for (Cylinder & c : world.cylinders) {
    c.p0 += offset;
    c.p1 += offset;
  }
  for (Box & b : world.boxes) {
    b.lo += offset;
    b.hi += offset;
  }
  for (TiledGround & g : world.grounds) {
    g.x0 += offset.x();
    g.x1 += offset.x();
    g.y0 += offset.y();
    g.y1 += offset.y();
    g.base_z += offset.z();
    g.origin_x += offset.x();
    g.origin_y += offset.y();
  }
  for (Eigen::Vector3d & p : world.path) {
    p += offset;
  }
  world.x_offset += offset.x();
}

std::optional<double> raycast_cylinder(
  const Cylinder & c, const Eigen::Vector3d & origin, const Eigen::Vector3d & dir)
{
  const Eigen::Vector3d axis_vec = c.p1 - c.p0;
  const double axis_len = axis_vec.norm();
  if (axis_len < 1e-12) {
    return std::nullopt;
  }
  const Eigen::Vector3d axis = axis_vec / axis_len;
  const Eigen::Vector3d oc = origin - c.p0;
  const Eigen::Vector3d d_perp = dir - dir.dot(axis) * axis;
  const Eigen::Vector3d oc_perp = oc - oc.dot(axis) * axis;
  const double a = d_perp.squaredNorm();
  if (a < 1e-14) {
    return std::nullopt;  // parallel to the axis: no lateral hit
  }
  const double b = oc_perp.dot(d_perp);
  const double cq = oc_perp.squaredNorm() - c.radius * c.radius;
  const double disc = b * b - a * cq;
  if (disc < 0.0) {
    return std::nullopt;
  }
  const double sq = std::sqrt(disc);
  for (double t : {(-b - sq) / a, (-b + sq) / a}) {
    if (t <= kRayEps) {
      continue;
    }
    const double s = (oc + t * dir).dot(axis);
    if (s >= 0.0 && s <= axis_len) {
      return t;
    }
  }
  return std::nullopt;
}

double TiledGround::height_at(double x, double y) const
{
  const std::int64_t ix = static_cast<std::int64_t>(std::floor((x - origin_x) / tile));
  const std::int64_t iy = static_cast<std::int64_t>(std::floor((y - origin_y) / tile));
  const double cx = (static_cast<double>(ix) + 0.5) * tile + origin_x;
  const double cy = (static_cast<double>(iy) + 0.5) * tile + origin_y;
  return base_z + amplitude * tile_jitter(ix, iy, seed) +
         max_slope * tile_jitter(ix, iy, seed ^ 0x5bd1e995) * (x - cx) +
         max_slope * tile_jitter(ix, iy, seed ^ 0xc2b2ae35) * (y - cy);
}

std::optional<double> raycast_ground(
  const TiledGround & g, const Eigen::Vector3d & origin, const Eigen::Vector3d & dir,
  double max_range)
{
  // The sensor always flies above the tiles; only downward rays can land.
  if (dir.z() >= -1e-12) {
    return std::nullopt;
  }

  // Clip the march to the covered rectangle.
  double t_lo = 0.0;
  double t_hi = max_range;
  for (int axis = 0; axis < 2; ++axis) {
    const double o = axis == 0 ? origin.x() : origin.y();
    const double d = axis == 0 ? dir.x() : dir.y();
    const double lo = axis == 0 ? g.x0 : g.y0;
    const double hi = axis == 0 ? g.x1 : g.y1;
    if (std::abs(d) < 1e-14) {
      if (o < lo || o > hi) {
        return std::nullopt;
      }
      continue;
    }
    double t0 = (lo - o) / d;
    double t1 = (hi - o) / d;
    if (t0 > t1) {
      std::swap(t0, t1);
    }
    t_lo = std::max(t_lo, t0);
    t_hi = std::min(t_hi, t1);
    if (t_lo > t_hi) {
      return std::nullopt;
    }
  }

  // 2-D DDA over tiles: in each crossed tile test the top face, and at tile
  // boundaries the small vertical step faces.
  const auto tile_index = [&g](double v, double o) {
    return std::floor((v - o) / g.tile);
  };
  double t = t_lo;
  double ix = tile_index(origin.x() + dir.x() * t, g.origin_x);
  double iy = tile_index(origin.y() + dir.y() * t, g.origin_y);
  const double step_x = dir.x() > 0.0 ? 1.0 : -1.0;
  const double step_y = dir.y() > 0.0 ? 1.0 : -1.0;
  const double t_delta_x = std::abs(dir.x()) < 1e-14
                             ? std::numeric_limits<double>::infinity()
                             : g.tile / std::abs(dir.x());
  const double t_delta_y = std::abs(dir.y()) < 1e-14
                             ? std::numeric_limits<double>::infinity()
                             : g.tile / std::abs(dir.y());
  const auto boundary_t = [&](double index, double o_component, double d_component,
                              double lattice_origin, double step) {
    if (std::abs(d_component) < 1e-14) {
      return std::numeric_limits<double>::infinity();
    }
    const double next = (index + (step > 0.0 ? 1.0 : 0.0)) * g.tile + lattice_origin;
    return (next - o_component) / d_component;
  };
  double t_max_x = boundary_t(ix, origin.x(), dir.x(), g.origin_x, step_x);
  double t_max_y = boundary_t(iy, origin.y(), dir.y(), g.origin_y, step_y);

  for (int guard = 0; guard < 4096; ++guard) {
    const double t_exit = std::min({t_max_x, t_max_y, t_hi});
    const std::int64_t iix = static_cast<std::int64_t>(ix);
    const std::int64_t iiy = static_cast<std::int64_t>(iy);
    const double h0 = g.base_z + g.amplitude * tile_jitter(iix, iiy, g.seed);
    const double sx = g.max_slope * tile_jitter(iix, iiy, g.seed ^ 0x5bd1e995);
    const double sy = g.max_slope * tile_jitter(iix, iiy, g.seed ^ 0xc2b2ae35);
    const double cx = (ix + 0.5) * g.tile + g.origin_x;
    const double cy = (iy + 0.5) * g.tile + g.origin_y;

    // Step face at the segment entry: the ray is already below this tile's
    // surface when it crosses into its column.
    const Eigen::Vector3d entry = origin + dir * t;
    if (entry.z() < h0 + sx * (entry.x() - cx) + sy * (entry.y() - cy) && t > kRayEps) {
      return t;
    }
    // Sloped top face inside this tile's t-interval.
    const double den = dir.z() - sx * dir.x() - sy * dir.y();
    if (std::abs(den) > 1e-12) {
      const double num =
        h0 + sx * (origin.x() - cx) + sy * (origin.y() - cy) - origin.z();
      const double t_top = num / den;
      if (t_top >= std::max(t, kRayEps) && t_top <= t_exit) {
        return t_top;
      }
    }
    if (t_exit >= t_hi) {
      return std::nullopt;
    }
    t = t_exit;
    if (t_max_x <= t_max_y) {
      ix += step_x;
      t_max_x += t_delta_x;
    } else {
      iy += step_y;
      t_max_y += t_delta_y;
    }
  }
  return std::nullopt;
}

std::optional<double> raycast_box(
  const Box & b, const Eigen::Vector3d & origin, const Eigen::Vector3d & dir)
{
  double t_in = -std::numeric_limits<double>::infinity();
  double t_out = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double d = dir(axis);
    if (std::abs(d) < 1e-14) {
      if (origin(axis) < b.lo(axis) || origin(axis) > b.hi(axis)) {
        return std::nullopt;
      }
      continue;
    }
    double t0 = (b.lo(axis) - origin(axis)) / d;
    double t1 = (b.hi(axis) - origin(axis)) / d;
    if (t0 > t1) {
      std::swap(t0, t1);
    }
    t_in = std::max(t_in, t0);
    t_out = std::min(t_out, t1);
    if (t_in > t_out) {
      return std::nullopt;
    }
  }
  if (t_in > kRayEps) {
    return t_in;
  }
  return std::nullopt;
}

std::optional<double> raycast(
  const WorldModel & world, const Eigen::Vector3d & origin, const Eigen::Vector3d & dir,
  double max_range)
{
  double best = max_range;
  bool hit = false;
  for (const Cylinder & c : world.cylinders) {
    const std::optional<double> t = raycast_cylinder(c, origin, dir);
    if (t && *t < best) {
      best = *t;
      hit = true;
    }
  }
  for (const Box & b : world.boxes) {
    const std::optional<double> t = raycast_box(b, origin, dir);
    if (t && *t < best) {
      best = *t;
      hit = true;
    }
  }
  for (const TiledGround & g : world.grounds) {
    const std::optional<double> t = raycast_ground(g, origin, dir, best);
    if (t && *t < best) {
      best = *t;
      hit = true;
    }
  }
  return hit ? std::optional<double>(best) : std::nullopt;
}

CompositeWorld CompositeWorld::chain(const std::vector<WorldKind> & kinds, std::uint64_t seed)
{
  if (kinds.empty()) {
    throw std::invalid_argument("composite world: need at least one world kind");
  }
  CompositeWorld composite;
  double offset = 0.0;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    WorldModel w =
      generate_world(kinds[i], derive_seed(seed, "world#" + std::to_string(i)));
    translate_world(w, Eigen::Vector3d(offset, 0.0, 0.0));
    offset += w.extent_x;
    composite.worlds.push_back(std::move(w));
  }
  return composite;
}

CompositeWorld CompositeWorld::single(WorldKind kind, std::uint64_t seed)
{
  return chain({kind}, seed);
}

std::optional<double> CompositeWorld::cast(
  const Eigen::Vector3d & origin, const Eigen::Vector3d & dir, double max_range) const
{
  double best = max_range;
  bool hit = false;
  for (const WorldModel & w : worlds) {
    // Cheap x-slab cull: skip worlds the ray cannot reach within `best`.
    const double margin = 5.0;
    const double x_lo = w.x_offset - margin;
    const double x_hi = w.x_offset + w.extent_x + margin;
    if (std::abs(dir.x()) > 1e-12) {
      const double t0 = (x_lo - origin.x()) / dir.x();
      const double t1 = (x_hi - origin.x()) / dir.x();
      if (std::max(t0, t1) < 0.0 || std::min(t0, t1) > best) {
        continue;
      }
    } else if (origin.x() < x_lo || origin.x() > x_hi) {
      continue;
    }
    const std::optional<double> t = raycast(w, origin, dir, best);
    if (t && *t < best) {
      best = *t;
      hit = true;
    }
  }
  return hit ? std::optional<double>(best) : std::nullopt;
}

std::vector<Eigen::Vector3d> CompositeWorld::default_path() const
{
  std::vector<Eigen::Vector3d> path;
  for (const WorldModel & w : worlds) {
    for (const Eigen::Vector3d & p : w.path) {
      if (!path.empty() && (path.back() - p).norm() < 1e-9) {
        continue;
      }
      path.push_back(p);
    }
  }
  return path;
}

std::string CompositeWorld::kind_at(double x) const
{
  const WorldModel * best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const WorldModel & w : worlds) {
    if (x >= w.x_offset && x <= w.x_offset + w.extent_x) {
      return to_string(w.kind);
    }
    const double dist = std::min(std::abs(x - w.x_offset), std::abs(x - w.x_offset - w.extent_x));
    if (dist < best_dist) {
      best_dist = dist;
      best = &w;
    }
  }
  return best != nullptr ? to_string(best->kind) : std::string();
}

double CompositeWorld::total_extent() const
{
  double total = 0.0;
  for (const WorldModel & w : worlds) {
    total += w.extent_x;
  }
  return total;
}

}  // namespace adaptune::sim
