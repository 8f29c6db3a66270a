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

#include "adaptune/surrogate.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

using namespace adaptune;

namespace {

FeatureVector fv(std::initializer_list<double> values)
{
  FeatureVector q;
  q.values = values;
  return q;
}

std::vector<LabeledSample> random_samples(std::size_t n, std::size_t dim, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<LabeledSample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    LabeledSample s;
    for (std::size_t d = 0; d < dim; ++d) {
      s.q.values.push_back(unit(rng));
    }
    s.y = unit(rng) * 10.0;
    samples.push_back(std::move(s));
  }
  return samples;
}

/// Brute-force k-NN oracle with the same normalization and tie rule.
double knn_oracle(
  const std::vector<LabeledSample> & samples, const FeatureVector & q, int k,
  const std::vector<double> & lo, const std::vector<double> & hi)
{
  std::vector<std::pair<double, std::size_t>> dists;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < q.values.size(); ++d) {
      const double span = hi[d] - lo[d];
      if (span <= 0.0) {
        continue;
      }
      const double diff = (q.values[d] - samples[i].q.values[d]) / span;
      acc += diff * diff;
    }
    dists.emplace_back(acc, i);
  }
  std::sort(dists.begin(), dists.end());
  double mean = 0.0;
  for (int i = 0; i < k; ++i) {
    mean += samples[static_cast<std::size_t>(dists[static_cast<std::size_t>(i)].second)].y;
  }
  return mean / k;
}

}  // namespace

TEST_CASE("build_feature concatenates descriptor and encoded parameters")
{
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("a", 0.0, 2.0));
  space.specs.push_back(ParameterSpec::Uniform("b", 0.0, 2.0));
  EnvDescriptor e;
  e.values.assign(10, 0.0);
  ParameterVector x;
  x.values = {ParamValue{1.0}, ParamValue{1.0}};
  const FeatureVector q = build_feature(e, x, space);
  REQUIRE(q.size() == 12);
  for (int i = 0; i < 10; ++i) {
    CHECK(q.values[static_cast<std::size_t>(i)] == 0.0);
  }
  CHECK(q.values[10] == doctest::Approx(0.5));
  CHECK(q.values[11] == doctest::Approx(0.5));

  // Changing only x changes only the trailing components.
  ParameterVector x2;
  x2.values = {ParamValue{2.0}, ParamValue{0.0}};
  const FeatureVector q2 = build_feature(e, x2, space);
  for (int i = 0; i < 10; ++i) {
    CHECK(q2.values[static_cast<std::size_t>(i)] == q.values[static_cast<std::size_t>(i)]);
  }
  CHECK(q2.values[10] == doctest::Approx(1.0));

  e.values[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(build_feature(e, x, space), std::invalid_argument);
}

TEST_CASE("fit rejects undersized sample sets")
{
  std::mt19937_64 rng(71);
  CHECK_THROWS_AS(KnnSurrogate::fit(random_samples(3, 2, rng), 5), std::invalid_argument);
}

TEST_CASE("k equal to n averages all labels")
{
  std::mt19937_64 rng(73);
  const std::vector<LabeledSample> samples = random_samples(5, 3, rng);
  double mean = 0.0;
  for (const LabeledSample & s : samples) {
    mean += s.y;
  }
  mean /= 5.0;
  const KnnSurrogate model = KnnSurrogate::fit(samples, 5);
  CHECK(model.predict(fv({0.3, 0.3, 0.3})) == doctest::Approx(mean));
}

TEST_CASE("k = 1 interpolates training points exactly")
{
  std::mt19937_64 rng(79);
  const std::vector<LabeledSample> samples = random_samples(64, 3, rng);
  const KnnSurrogate model = KnnSurrogate::fit(samples, 1);
  for (const LabeledSample & s : samples) {
    CHECK(model.predict(s.q) == doctest::Approx(s.y));
  }
}

TEST_CASE("two labels, k = 2: any query gets the mean")
{
  std::vector<LabeledSample> samples;
  samples.push_back(LabeledSample{fv({0.0, 0.0}), 2.0});
  samples.push_back(LabeledSample{fv({1.0, 1.0}), 4.0});
  const KnnSurrogate model = KnnSurrogate::fit(samples, 2);
  CHECK(model.predict(fv({0.9, 0.1})) == doctest::Approx(3.0));
}

TEST_CASE("predictions match the exhaustive-scan oracle")
{
  std::mt19937_64 rng(83);
  const std::vector<LabeledSample> samples = random_samples(1000, 6, rng);
  std::vector<double> lo(6, std::numeric_limits<double>::infinity());
  std::vector<double> hi(6, -std::numeric_limits<double>::infinity());
  for (const LabeledSample & s : samples) {
    for (std::size_t d = 0; d < 6; ++d) {
      lo[d] = std::min(lo[d], s.q.values[d]);
      hi[d] = std::max(hi[d], s.q.values[d]);
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k : {1, 5}) {
    const KnnSurrogate model = KnnSurrogate::fit(samples, k);
    for (int i = 0; i < 100; ++i) {
      FeatureVector q;
      for (int d = 0; d < 6; ++d) {
        q.values.push_back(unit(rng));
      }
      CHECK(model.predict(q) == knn_oracle(samples, q, k, lo, hi));
    }
  }
}

TEST_CASE("predictions stay within the label range")
{
  std::mt19937_64 rng(89);
  const std::vector<LabeledSample> samples = random_samples(200, 4, rng);
  const KnnSurrogate model = KnnSurrogate::fit(samples, 5);
  std::uniform_real_distribution<double> wide(-1.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    FeatureVector q;
    for (int d = 0; d < 4; ++d) {
      q.values.push_back(wide(rng));
    }
    const double p = model.predict(q);
    CHECK(p >= model.min_label());
    CHECK(p <= model.max_label());
  }
}

TEST_CASE("affine rescaling of a feature dimension leaves predictions unchanged")
{
  std::mt19937_64 rng(97);
  const std::vector<LabeledSample> samples = random_samples(300, 3, rng);
  const KnnSurrogate base = KnnSurrogate::fit(samples, 5);

  const double scale = 37.5;
  const double shift = -4.0;
  std::vector<LabeledSample> rescaled = samples;
  for (LabeledSample & s : rescaled) {
    s.q.values[1] = scale * s.q.values[1] + shift;
  }
  const KnnSurrogate scaled = KnnSurrogate::fit(rescaled, 5);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    FeatureVector q;
    for (int d = 0; d < 3; ++d) {
      q.values.push_back(unit(rng));
    }
    FeatureVector q2 = q;
    q2.values[1] = scale * q2.values[1] + shift;
    CHECK(base.predict(q) == doctest::Approx(scaled.predict(q2)).epsilon(1e-12));
  }
}

TEST_CASE("constant dimensions contribute nothing")
{
  std::vector<LabeledSample> samples;
  samples.push_back(LabeledSample{fv({7.0, 0.0}), 1.0});
  samples.push_back(LabeledSample{fv({7.0, 1.0}), 3.0});
  const KnnSurrogate model = KnnSurrogate::fit(samples, 1);
  CHECK(model.predict(fv({7.0, 0.9})) == doctest::Approx(3.0));
}

TEST_CASE("distance ties break by insertion order")
{
  std::vector<LabeledSample> samples;
  samples.push_back(LabeledSample{fv({0.0, 0.5}), 1.0});
  samples.push_back(LabeledSample{fv({1.0, 0.5}), 9.0});
  samples.push_back(LabeledSample{fv({0.0, 0.5}), 5.0});  // duplicate location
  const KnnSurrogate model = KnnSurrogate::fit(samples, 1);
  CHECK(model.predict(fv({0.0, 0.5})) == doctest::Approx(1.0));
}

TEST_CASE("surrogate JSON round trip")
{
  std::mt19937_64 rng(101);
  const std::vector<LabeledSample> samples = random_samples(50, 4, rng);
  KnnSurrogate model = KnnSurrogate::fit(samples, 5);
  model.pca_hash = "abc123";
  const auto path = (std::filesystem::temp_directory_path() / "adaptune_surrogate.json").string();
  model.save(path);
  const KnnSurrogate back = KnnSurrogate::load(path);
  CHECK(back.k() == 5);
  CHECK(back.pca_hash == "abc123");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    FeatureVector q;
    for (int d = 0; d < 4; ++d) {
      q.values.push_back(unit(rng));
    }
    CHECK(back.predict(q) == model.predict(q));
  }
}

TEST_CASE("select_parameters recovers a planted optimum")
{
  // Labels measure distance to a planted point in encoded coordinates.
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("a", 0.0, 1.0));
  space.specs.push_back(ParameterSpec::Uniform("b", 0.0, 1.0));
  const Eigen::Vector2d target(0.2, 0.7);

  std::mt19937_64 data_rng(103);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 2000; ++i) {
    const double a = unit(data_rng);
    const double b = unit(data_rng);
    LabeledSample s;
    s.q.values = {1.0, a, b};  // constant descriptor dim plus the parameters
    s.y = std::hypot(a - target.x(), b - target.y());
    samples.push_back(std::move(s));
  }
  const KnnSurrogate model = KnnSurrogate::fit(samples, 5);
  EnvDescriptor e;
  e.values = {1.0};

  TpeConfig cfg;
  int hits = 0;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + seed));
    double predicted = 0.0;
    const ParameterVector x = select_parameters(model, e, space, 64, cfg, rng, &predicted);
    const std::vector<double> u = encode(space, x);
    const double dist = std::hypot(u[0] - target.x(), u[1] - target.y());
    if (dist < 0.15) {
      ++hits;
    }
    // Never worse than the best of its own trials: re-check via prediction.
    CHECK(predicted <= model.max_label());
  }
  CHECK(hits >= 18);
}

TEST_CASE("select_parameters with budget 1 is a uniform draw")
{
  std::mt19937_64 rng(107);
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 10; ++i) {
    samples.push_back(LabeledSample{fv({0.1 * i}), 5.0});
  }
  const KnnSurrogate model = KnnSurrogate::fit(samples, 5);
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("a", 0.0, 1.0));
  EnvDescriptor e;
  e.values = {};
  TpeConfig cfg;
  double predicted = 0.0;
  const ParameterVector x = select_parameters(model, e, space, 1, cfg, rng, &predicted);
  const double v = std::get<double>(x.values[0]);
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);
  // Constant labels: any x predicts the constant.
  CHECK(predicted == doctest::Approx(5.0));
}
