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

#include "adaptune/tpe.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

using namespace adaptune;

namespace {

ParameterSpace unit_space(int dims = 1)
{
  ParameterSpace space;
  for (int d = 0; d < dims; ++d) {
    space.specs.push_back(ParameterSpec::Uniform("x" + std::to_string(d), 0.0, 1.0));
  }
  return space;
}

ParameterVector vec1(double v)
{
  ParameterVector x;
  x.values = {ParamValue{v}};
  return x;
}

History history_of(const std::vector<std::pair<double, double>> & xy)
{
  History h;
  for (const auto & [x, y] : xy) {
    h.trials.push_back(TrialResult{vec1(x), y, false});
  }
  return h;
}

double simpson_integral(const ParzenEstimator & pe, std::size_t dim, int n = 2000)
{
  double acc = 0.0;
  const double dx = 1.0 / n;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * pe.pdf_dim(dim, i * dx);
  }
  return acc * dx / 3.0;
}

}  // namespace

TEST_CASE("split_history rank arithmetic")
{
  std::vector<std::pair<double, double>> xy;
  for (int i = 1; i <= 10; ++i) {
    xy.emplace_back(i * 0.1, static_cast<double>(i));
  }
  const HistorySplit split = split_history(history_of(xy), 0.25);
  CHECK(split.threshold == doctest::Approx(3.0));
  REQUIRE(split.below.size() == 2);
  CHECK(split.below[0].y == doctest::Approx(1.0));
  CHECK(split.below[1].y == doctest::Approx(2.0));
  CHECK(split.above.size() == 8);
}

TEST_CASE("split_history degenerate cases")
{
  const HistorySplit ties = split_history(history_of({{0.1, 5.0}, {0.2, 5.0}, {0.3, 5.0}}), 0.25);
  CHECK(ties.below.empty());
  CHECK(ties.above.size() == 3);

  const HistorySplit single = split_history(history_of({{0.5, 1.0}}), 0.25);
  CHECK(single.below.empty());
  CHECK(single.above.size() == 1);

  CHECK_THROWS_AS(split_history(History{}, 0.25), std::invalid_argument);
}

TEST_CASE("split_history puts failed trials in the above set")
{
  History h = history_of({{0.1, 1.0}, {0.2, 2.0}, {0.3, 3.0}, {0.4, 4.0}});
  TrialResult failed;
  failed.x = vec1(0.9);
  failed.failed = true;
  h.trials.push_back(failed);
  const HistorySplit split = split_history(h, 0.25);
  // Partition property: below + above = everything, below has no failures.
  CHECK(split.below.size() + split.above.size() == h.size());
  for (const TrialResult & t : split.below) {
    CHECK(!t.failed);
    CHECK(t.y < split.threshold);
  }
  const bool failed_in_above = std::any_of(
    split.above.begin(), split.above.end(), [](const TrialResult & t) { return t.failed; });
  CHECK(failed_in_above);
}

TEST_CASE("parzen estimator: empty set is the uniform prior")
{
  const ParzenEstimator pe({}, 1);
  for (double u : {0.0, 0.25, 0.5, 0.99}) {
    CHECK(pe.pdf_dim(0, u) == doctest::Approx(1.0));
  }
}

TEST_CASE("parzen estimator: single point is unimodal around it")
{
  const ParzenEstimator pe({{0.5}}, 1);
  double best_u = 0.0;
  double best_pdf = -1.0;
  double prev = -1.0;
  bool rising_then_falling = true;
  bool seen_peak = false;
  for (int i = 0; i <= 1000; ++i) {
    const double u = i * 1e-3;
    const double p = pe.pdf_dim(0, u);
    if (p > best_pdf) {
      best_pdf = p;
      best_u = u;
    }
    if (prev >= 0.0) {
      if (p < prev - 1e-12) {
        seen_peak = true;
      } else if (seen_peak && p > prev + 1e-12) {
        rising_then_falling = false;
      }
    }
    prev = p;
  }
  CHECK(best_u > 0.4);
  CHECK(best_u < 0.6);
  CHECK(rising_then_falling);
}

TEST_CASE("parzen estimator pdf integrates to one")
{
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, 12);
  for (int fit = 0; fit < 100; ++fit) {
    std::vector<std::vector<double>> points;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      points.push_back({unit(rng)});
    }
    const ParzenEstimator pe(points, 1);
    CHECK(simpson_integral(pe, 0) == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("parzen samples stay in the unit box")
{
  std::mt19937_64 rng(32);
  const ParzenEstimator pe({{0.01, 0.99}, {0.98, 0.02}}, 2);
  for (int i = 0; i < 2000; ++i) {
    for (double v : pe.sample(rng)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("density ratio prefers the good cluster")
{
  // Below-trials cluster at 0.2, above-trials at 0.8.
  std::vector<std::vector<double>> below;
  std::vector<std::vector<double>> above;
  for (int i = 0; i < 8; ++i) {
    below.push_back({0.2 + 0.01 * (i - 4)});
    above.push_back({0.8 + 0.01 * (i - 4)});
  }
  const ParzenEstimator l(below, 1);
  const ParzenEstimator g(above, 1);
  const double ratio_a = l.log_pdf({0.2}) - g.log_pdf({0.2});
  const double ratio_b = l.log_pdf({0.8}) - g.log_pdf({0.8});
  CHECK(ratio_a > ratio_b);
}

TEST_CASE("suggest draws from the prior with an empty history")
{
  const ParameterSpace space = unit_space();
  TpeConfig cfg;
  std::mt19937_64 rng(33);
  const ParameterVector x = suggest(History{}, space, cfg, rng);
  const double v = std::get<double>(x.values[0]);
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);
}

TEST_CASE("suggest exploits a 1-D quadratic")
{
  const ParameterSpace space = unit_space();
  TpeConfig cfg;
  cfg.seed = 7;
  const Objective objective = [](const ParameterVector & x) {
    const double v = std::get<double>(x.values[0]);
    return (v - 0.3) * (v - 0.3);
  };
  const History h = optimize(objective, space, 64, cfg);
  std::mt19937_64 rng(101);
  double sum = 0.0;
  for (int i = 0; i < 16; ++i) {
    sum += std::get<double>(suggest(h, space, cfg, rng).values[0]);
  }
  const double mean = sum / 16.0;
  CHECK(mean > 0.2);
  CHECK(mean < 0.4);
}

TEST_CASE("suggest follows the below cluster")
{
  // 5 good trials near x = 0.8, 15 bad ones spread elsewhere.
  History h;
  for (int i = 0; i < 5; ++i) {
    h.trials.push_back(TrialResult{vec1(0.8 + 0.005 * (i - 2)), 0.1 + 0.001 * i, false});
  }
  for (int i = 0; i < 15; ++i) {
    h.trials.push_back(TrialResult{vec1(0.05 + 0.045 * i), 1.0 + 0.1 * i, false});
  }
  const ParameterSpace space = unit_space();
  TpeConfig cfg;
  cfg.n_startup = 16;
  int in_range = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    const double v = std::get<double>(suggest(h, space, cfg, rng).values[0]);
    if (v >= 0.6 && v <= 1.0) {
      ++in_range;
    }
  }
  CHECK(in_range >= 90);
}

TEST_CASE("optimize records every trial in order")
{
  const ParameterSpace space = unit_space();
  TpeConfig cfg;
  cfg.seed = 1;
  const History h = optimize([](const ParameterVector &) { return 2.5; }, space, 5, cfg);
  REQUIRE(h.size() == 5);
  for (const TrialResult & t : h.trials) {
    CHECK(!t.failed);
    CHECK(t.y == doctest::Approx(2.5));
  }
}

TEST_CASE("optimize is deterministic given the seed")
{
  const ParameterSpace space = unit_space(2);
  TpeConfig cfg;
  cfg.seed = 99;
  const Objective objective = [](const ParameterVector & x) {
    const double a = std::get<double>(x.values[0]);
    const double b = std::get<double>(x.values[1]);
    return a * a + b * b;
  };
  const History h1 = optimize(objective, space, 40, cfg);
  const History h2 = optimize(objective, space, 40, cfg);
  REQUIRE(h1.size() == h2.size());
  for (std::size_t i = 0; i < h1.size(); ++i) {
    CHECK(encode(space, h1.trials[i].x) == encode(space, h2.trials[i].x));
    CHECK(h1.trials[i].y == h2.trials[i].y);
  }
}

TEST_CASE("objective failures are recorded and the loop continues")
{
  const ParameterSpace space = unit_space();
  TpeConfig cfg;
  cfg.seed = 5;
  const Objective objective = [](const ParameterVector & x) {
    const double v = std::get<double>(x.values[0]);
    if (v > 0.9) {
      throw std::runtime_error("diverged");
    }
    return v;
  };
  const History h = optimize(objective, space, 64, cfg);
  REQUIRE(h.size() == 64);
  int failed = 0;
  for (const TrialResult & t : h.trials) {
    if (t.failed) {
      ++failed;
    } else {
      CHECK(std::get<double>(t.x.values[0]) <= 0.9);
    }
  }
  CHECK(failed > 0);
  CHECK(failed < 64);
}

TEST_CASE("non-finite objective values are failures")
{
  const ParameterSpace space = unit_space();
  TpeConfig cfg;
  cfg.seed = 6;
  const History h = optimize(
    [](const ParameterVector &) { return std::numeric_limits<double>::infinity(); }, space, 3,
    cfg);
  for (const TrialResult & t : h.trials) {
    CHECK(t.failed);
  }
}

TEST_CASE("tpe beats random search on a 2-D sphere (single seed smoke)")
{
  const ParameterSpace space = unit_space(2);
  const Objective sphere = [](const ParameterVector & x) {
    const double a = std::get<double>(x.values[0]);
    const double b = std::get<double>(x.values[1]);
    return a * a + b * b;
  };
  TpeConfig cfg;
  cfg.seed = 3;
  const History tpe_h = optimize(sphere, space, 64, cfg);

  std::mt19937_64 rng(3);
  double random_best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 64; ++i) {
    random_best = std::min(random_best, sphere(sample_uniform(space, rng)));
  }
  REQUIRE(tpe_h.best() != nullptr);
  CHECK(tpe_h.best()->y <= random_best);
}

TEST_CASE("history JSONL round trip")
{
  const ParameterSpace space = unit_space(2);
  TpeConfig cfg;
  cfg.seed = 12;
  const Objective objective = [](const ParameterVector & x) {
    const double v = std::get<double>(x.values[0]);
    if (v > 0.95) {
      throw std::runtime_error("bad region");
    }
    return v;
  };
  const History h = optimize(objective, space, 20, cfg);
  const auto path =
    (std::filesystem::temp_directory_path() / "adaptune_history_test.jsonl").string();
  save_history(h, space, path);
  const History back = load_history(space, path);
  REQUIRE(back.size() == h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(back.trials[i].failed == h.trials[i].failed);
    if (!h.trials[i].failed) {
      CHECK(back.trials[i].y == doctest::Approx(h.trials[i].y).epsilon(1e-12));
    }
  }
}
