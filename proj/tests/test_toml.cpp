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

#include "adaptune/toml.hpp"

#include <doctest.h>

using namespace adaptune;

TEST_CASE("scalar values and sections")
{
  const std::string text = R"(
# a comment
title = "demo"
count = 42
ratio = 2.5e-1
flag = true

[nested.section]
value = 1_000
name = 'literal'
)";
  const toml::Table t = toml::parse(text);
  CHECK(t.at("title").as_string() == "demo");
  CHECK(t.at("count").as_int() == 42);
  CHECK(t.at("ratio").as_double() == doctest::Approx(0.25));
  CHECK(t.at("flag").as_bool());
  const toml::Table & nested = t.at("nested").as_table().at("section").as_table();
  CHECK(nested.at("value").as_int() == 1000);
  CHECK(nested.at("name").as_string() == "literal");
}

TEST_CASE("arrays including nested and multiline")
{
  const std::string text = R"(
edges = [30.0, 60.0]
waypoints = [
  [0.0, 0.0, 1.6],  # start
  [60.0, 0.0, 1.6],
]
names = ["a", "b"]
)";
  const toml::Table t = toml::parse(text);
  CHECK(t.at("edges").as_double_array() == std::vector<double>{30.0, 60.0});
  const toml::Array & wps = t.at("waypoints").as_array();
  REQUIRE(wps.size() == 2);
  CHECK(wps[1].as_double_array() == std::vector<double>{60.0, 0.0, 1.6});
  CHECK(t.at("names").as_string_array() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("dotted keys")
{
  const toml::Table t = toml::parse("a.b.c = 3\n");
  CHECK(t.at("a").as_table().at("b").as_table().at("c").as_int() == 3);
}

TEST_CASE("errors carry line numbers")
{
  try {
    toml::parse("good = 1\nbad = \n", "cfg.toml");
    FAIL("expected a parse error");
  } catch (const std::runtime_error & e) {
    CHECK(std::string(e.what()).find("cfg.toml:2") != std::string::npos);
  }
  CHECK_THROWS(toml::parse("dup = 1\ndup = 2\n"));
  CHECK_THROWS(toml::parse("x = { a = 1 }\n"));  // inline tables unsupported
  CHECK_THROWS(toml::parse("x = [1, 2\n"));
}

TEST_CASE("table redefinition conflicts are rejected")
{
  CHECK_THROWS(toml::parse("a = 1\n[a]\nb = 2\n"));
}
