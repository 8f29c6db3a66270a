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

#include "adaptune/param_space.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

using namespace adaptune;

namespace {

ParameterSpace mixed_space()
{
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("u", 0.0, 10.0));
  space.specs.push_back(ParameterSpec::LogUniform("lg", 1.0, 100.0));
  space.specs.push_back(ParameterSpec::Discrete("d", 0.0, 4.0, 1.0));
  space.specs.push_back(ParameterSpec::Categorical("c", {"a", "b", "c", "d"}));
  return space;
}

}  // namespace

TEST_CASE("spec validation")
{
  CHECK_THROWS_AS(ParameterSpec::Uniform("x", 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ParameterSpec::LogUniform("x", 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ParameterSpec::Discrete("x", 0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ParameterSpec::Categorical("x", {"only"}), std::invalid_argument);

  ParameterSpace dup;
  dup.specs.push_back(ParameterSpec::Uniform("x", 0.0, 1.0));
  dup.specs.push_back(ParameterSpec::Uniform("x", 0.0, 2.0));
  CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
}

TEST_CASE("sample_uniform respects bounds and is reproducible")
{
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("u", 0.0, 1.0));
  std::mt19937_64 a(42);
  std::mt19937_64 b(42);
  const ParameterVector xa = sample_uniform(space, a);
  const ParameterVector xb = sample_uniform(space, b);
  const double v = std::get<double>(xa.values[0]);
  CHECK(v >= 0.0);
  CHECK(v < 1.0);
  CHECK(v == std::get<double>(xb.values[0]));
}

TEST_CASE("uniform draws have the right mean")
{
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("u", 0.0, 1.0));
  std::mt19937_64 rng(1);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    sum += std::get<double>(sample_uniform(space, rng).values[0]);
  }
  const double mean = sum / 10000.0;
  CHECK(mean > 0.48);
  CHECK(mean < 0.52);
}

TEST_CASE("categorical draws are near-uniform over labels")
{
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Categorical("c", {"a", "b", "c", "d"}));
  std::mt19937_64 rng(2);
  std::array<int, 4> counts{0, 0, 0, 0};
  for (int i = 0; i < 10000; ++i) {
    const std::string label = std::get<std::string>(sample_uniform(space, rng).values[0]);
    counts[static_cast<std::size_t>(label[0] - 'a')]++;
  }
  for (int c : counts) {
    const double freq = c / 10000.0;
    CHECK(freq > 0.22);
    CHECK(freq < 0.28);
  }
}

TEST_CASE("encode midpoints")
{
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("u", 0.0, 10.0));
  space.specs.push_back(ParameterSpec::LogUniform("lg", 1.0, 100.0));
  ParameterVector x;
  x.values = {ParamValue{5.0}, ParamValue{10.0}};
  const std::vector<double> u = encode(space, x);
  CHECK(u[0] == doctest::Approx(0.5));
  CHECK(u[1] == doctest::Approx(0.5));
}

TEST_CASE("encode rejects out-of-bounds values")
{
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("u", 0.0, 1.0));
  ParameterVector x;
  x.values = {ParamValue{1.5}};
  CHECK_THROWS_AS(encode(space, x), std::invalid_argument);
}

TEST_CASE("decode endpoints and interior")
{
  const ParameterSpace space = mixed_space();
  const ParameterVector lo = decode(space, {0.0, 0.0, 0.0, 0.0});
  CHECK(std::get<double>(lo.values[0]) == doctest::Approx(0.0));
  CHECK(std::get<double>(lo.values[1]) == doctest::Approx(1.0));
  CHECK(std::get<double>(lo.values[2]) == doctest::Approx(0.0));
  CHECK(std::get<std::string>(lo.values[3]) == "a");

  const ParameterVector hi = decode(space, {1.0, 1.0, 1.0, 1.0});
  CHECK(std::get<double>(hi.values[0]) == doctest::Approx(10.0));
  CHECK(std::get<double>(hi.values[1]) == doctest::Approx(100.0));
  CHECK(std::get<double>(hi.values[2]) == doctest::Approx(4.0));
  CHECK(std::get<std::string>(hi.values[3]) == "d");

  ParameterSpace tiny;
  tiny.specs.push_back(ParameterSpec::Uniform("u", 2.0, 4.0));
  CHECK(std::get<double>(decode(tiny, {0.25}).values[0]) == doctest::Approx(2.5));
}

TEST_CASE("decode clamps out-of-range components")
{
  ParameterSpace space;
  space.specs.push_back(ParameterSpec::Uniform("u", 0.0, 1.0));
  const ParameterVector x = decode(space, {1.5});
  CHECK(std::get<double>(x.values[0]) == doctest::Approx(1.0));
}

TEST_CASE("encode/decode round trips")
{
  const ParameterSpace space = mixed_space();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    // decode(encode(x)) == x on sampled vectors.
    const ParameterVector x = sample_uniform(space, rng);
    const ParameterVector x2 = decode(space, encode(space, x));
    CHECK(std::abs(std::get<double>(x.values[0]) - std::get<double>(x2.values[0])) < 1e-12);
    CHECK(
      std::get<double>(x.values[1]) ==
      doctest::Approx(std::get<double>(x2.values[1])).epsilon(1e-12));
    CHECK(std::get<double>(x.values[2]) == std::get<double>(x2.values[2]));
    CHECK(std::get<std::string>(x.values[3]) == std::get<std::string>(x2.values[3]));

    // encode(decode(u)) == u for the continuous dims.
    const std::vector<double> u = {unit(rng), unit(rng), unit(rng), unit(rng)};
    const std::vector<double> u2 = encode(space, decode(space, u));
    CHECK(std::abs(u[0] - u2[0]) < 1e-12);
    CHECK(std::abs(u[1] - u2[1]) < 1e-9);  // log round trip
  }
}

TEST_CASE("sampled vectors satisfy the space invariants")
{
  const ParameterSpace space = mixed_space();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10000; ++i) {
    const ParameterVector x = sample_uniform(space, rng);
    CHECK_NOTHROW(validate_vector(space, x));
  }
}

TEST_CASE("space and params JSON round trips")
{
  const ParameterSpace space = mixed_space();
  const ParameterSpace back = ParameterSpace::from_json(space.to_json());
  REQUIRE(back.size() == space.size());
  CHECK(back.specs[1].kind == ParamKind::kLogUniform);
  CHECK(back.specs[3].labels == space.specs[3].labels);

  std::mt19937_64 rng(5);
  const ParameterVector x = sample_uniform(space, rng);
  const ParameterVector x2 = params_from_json(space, params_to_json(space, x));
  CHECK(encode(space, x) == encode(space, x2));
}
