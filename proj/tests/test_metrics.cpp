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

#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <random>

using namespace adaptune;

namespace {

Trajectory straight_line(std::size_t n, double step)
{
  Trajectory t;
  for (std::size_t i = 0; i < n; ++i) {
    Pose p;
    p.translation = Eigen::Vector3d(step * static_cast<double>(i), 0.0, 0.0);
    t.poses.push_back(p);
    t.timestamps.push_back(0.1 * static_cast<double>(i));
  }
  return t;
}

Trajectory scaled(const Trajectory & t, double factor)
{
  Trajectory out = t;
  for (Pose & p : out.poses) {
    p.translation *= factor;
  }
  return out;
}

Pose random_pose(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::Vector3d axis(unit(rng), unit(rng), unit(rng));
  axis = axis.norm() < 1e-6 ? Eigen::Vector3d::UnitZ() : axis.normalized();
  Pose p;
  p.rotation = Eigen::AngleAxisd(unit(rng) * 2.0, axis).toRotationMatrix();
  p.translation = Eigen::Vector3d(unit(rng), unit(rng), unit(rng)) * 20.0;
  return p;
}

}  // namespace

TEST_CASE("segment_end on a straight line")
{
  const Trajectory line = straight_line(100, 1.0);
  const auto end = segment_end(line, 0, 25.0);
  REQUIRE(end.has_value());
  CHECK(*end == 25);

  CHECK(!segment_end(line, 90, 25.0).has_value());
  CHECK_THROWS_AS(segment_end(line, 1000, 25.0), std::out_of_range);
}

TEST_CASE("segment_end matches a linear-scan oracle on variable steps")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> step(0.2, 2.5);
  Trajectory t;
  double x = 0.0;
  for (int i = 0; i < 200; ++i) {
    Pose p;
    p.translation = Eigen::Vector3d(x, 0.0, 0.0);
    t.poses.push_back(p);
    t.timestamps.push_back(static_cast<double>(i));
    x += step(rng);
  }
  for (std::size_t i = 0; i < t.size(); i += 7) {
    const auto end = segment_end(t, i, 10.0);
    // Oracle: in-order scan of the cumulative distance.
    double acc = 0.0;
    std::optional<std::size_t> expected;
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      acc += (t.poses[j].translation - t.poses[j - 1].translation).norm();
      if (acc >= 10.0) {
        expected = j;
        break;
      }
    }
    CHECK(end == expected);
  }
}

TEST_CASE("rte is zero for the ground truth itself")
{
  const Trajectory line = straight_line(120, 1.0);
  for (std::size_t i = 0; i < 40; i += 5) {
    const auto s = rte_at(line, line, i, 25.0);
    REQUIRE(s.has_value());
    CHECK(s->value_percent == doctest::Approx(0.0));
  }
  CHECK(mean_rte(line, line, 25.0) == doctest::Approx(0.0));
}

TEST_CASE("uniform 1% scale drift yields exactly 1% RTE")
{
  const Trajectory gt = straight_line(200, 1.0);
  const Trajectory est = scaled(gt, 1.01);
  for (double length : {5.0, 25.0, 50.0}) {
    const std::vector<RteSample> samples = per_frame_rtes(gt, est, length);
    REQUIRE(!samples.empty());
    for (const RteSample & s : samples) {
      CHECK(s.value_percent == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  CHECK(mean_rte(gt, est, 25.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single 0.25 m perturbation at the segment end gives 1% at L = 25")
{
  const Trajectory gt = straight_line(100, 1.0);
  Trajectory est = gt;
  const std::size_t j = 30;
  est.poses[j].translation += Eigen::Vector3d(0.0, 0.25, 0.0);
  const std::size_t i = j - 25;  // segment [i, j] spans exactly 25 m
  const auto s = rte_at(gt, est, i, 25.0);
  REQUIRE(s.has_value());
  CHECK(s->value_percent == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("per-frame sample count on a finite line")
{
  // 101 poses = 100 m of path; frames 0..74 have 25 m left (end <= 100).
  const Trajectory gt = straight_line(101, 1.0);
  const std::vector<RteSample> samples = per_frame_rtes(gt, gt, 25.0);
  CHECK(samples.size() == 76);
  CHECK(samples.front().frame == 0);
  CHECK(samples.back().frame == 75);

  const Trajectory tiny = straight_line(10, 1.0);
  CHECK(per_frame_rtes(tiny, tiny, 25.0).empty());
  CHECK_THROWS_AS(mean_rte(tiny, tiny, 25.0), std::runtime_error);

  Trajectory mismatched = gt;
  mismatched.poses.pop_back();
  mismatched.timestamps.pop_back();
  CHECK_THROWS_AS(per_frame_rtes(gt, mismatched, 25.0), std::invalid_argument);
}

TEST_CASE("mean_rte equals the mean of rte_at over valid frames")
{
  std::mt19937_64 rng(5);
  const Trajectory gt = straight_line(150, 1.0);
  Trajectory est = gt;
  std::normal_distribution<double> noise(0.0, 0.05);
  for (Pose & p : est.poses) {
    p.translation += Eigen::Vector3d(noise(rng), noise(rng), noise(rng));
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto s = rte_at(gt, est, i, 25.0);
    if (!s) {
      break;
    }
    sum += s->value_percent;
    ++count;
  }
  REQUIRE(count > 0);
  CHECK(mean_rte(gt, est, 25.0) == doctest::Approx(sum / count));
}

TEST_CASE("rte is invariant under a common rigid transform")
{
  std::mt19937_64 rng(7);
  // Irregular steps keep segment boundaries away from the exact length
  // threshold, where rounding after the transform could flip them.
  Trajectory gt;
  std::uniform_real_distribution<double> step(0.8, 1.2);
  double x = 0.0;
  for (int i = 0; i < 120; ++i) {
    Pose p;
    p.translation = Eigen::Vector3d(x, 0.0, 0.0);
    gt.poses.push_back(p);
    gt.timestamps.push_back(0.1 * i);
    x += step(rng);
  }
  Trajectory est = gt;
  std::normal_distribution<double> noise(0.0, 0.1);
  for (Pose & p : est.poses) {
    p.translation += Eigen::Vector3d(noise(rng), noise(rng), 0.0);
  }
  const Pose transform = random_pose(rng);
  Trajectory gt_moved = gt;
  Trajectory est_moved = est;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    gt_moved.poses[i] = compose(transform, gt.poses[i]);
    est_moved.poses[i] = compose(transform, est.poses[i]);
  }
  const std::vector<RteSample> a = per_frame_rtes(gt, est, 25.0);
  const std::vector<RteSample> b = per_frame_rtes(gt_moved, est_moved, 25.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].value_percent == doctest::Approx(b[i].value_percent).epsilon(1e-9));
  }
}

TEST_CASE("kitti_rte on a kilometer line")
{
  const Trajectory gt = straight_line(1001, 1.0);  // 1 km
  CHECK(kitti_rte(gt, gt) == doctest::Approx(0.0));
  const Trajectory est = scaled(gt, 1.01);
  CHECK(kitti_rte(gt, est) == doctest::Approx(1.0).epsilon(1e-6));

  const Trajectory short_line = straight_line(50, 1.0);
  CHECK_THROWS_AS(kitti_rte(short_line, short_line), std::runtime_error);
}

TEST_CASE("kitti_rte stride 10 tracks the stride-1 oracle")
{
  std::mt19937_64 rng(11);
  const Trajectory gt = straight_line(1201, 1.0);
  Trajectory est = gt;
  // Smooth drift plus noise, as an odometry-like error profile.
  double drift = 0.0;
  std::normal_distribution<double> noise(0.0, 0.02);
  for (std::size_t i = 0; i < est.size(); ++i) {
    drift += 0.002 + noise(rng) * 0.001;
    est.poses[i].translation += Eigen::Vector3d(noise(rng), drift, 0.0);
  }
  const double strided = kitti_rte(gt, est, 10);
  const double dense = kitti_rte(gt, est, 1);
  CHECK(std::abs(strided - dense) < 0.05);
}
