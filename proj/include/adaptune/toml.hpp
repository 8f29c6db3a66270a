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

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace adaptune::toml {

// Minimal TOML reader covering what the pipeline configs use: [a.b] table
// headers, dotted keys, strings, numbers, booleans, and (nested, multi-line)
// arrays. Dates and inline tables are rejected with an error.

class Value;
using Array = std::vector<Value>;

/// Insertion-ordered string-keyed map.
class Table {
public:
  bool contains(const std::string & key) const;
  const Value * find(const std::string & key) const;
  const Value & at(const std::string & key) const;
  Value & emplace(const std::string & key);  // throws if the key exists

  const std::vector<std::pair<std::string, Value>> & entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Typed lookups with defaults.
  double get_double(const std::string & key, double fallback) const;
  int get_int(const std::string & key, int fallback) const;
  bool get_bool(const std::string & key, bool fallback) const;
  std::string get_string(const std::string & key, const std::string & fallback) const;

private:
  std::vector<std::pair<std::string, Value>> entries_;
};

class Value {
public:
  Value() : v_(false) {}
  explicit Value(bool b) : v_(b) {}
  explicit Value(double d) : v_(d) {}
  explicit Value(std::string s) : v_(std::move(s)) {}
  explicit Value(Array a) : v_(std::move(a)) {}
  explicit Value(Table t) : v_(std::move(t)) {}

  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_number() const { return std::holds_alternative<double>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }
  bool is_table() const { return std::holds_alternative<Table>(v_); }

  bool as_bool() const;
  double as_double() const;
  long long as_int() const;  // requires an integral number
  const std::string & as_string() const;
  const Array & as_array() const;
  const Table & as_table() const;
  Table & as_table();

  /// Array of numbers convenience accessor.
  std::vector<double> as_double_array() const;
  std::vector<std::string> as_string_array() const;

private:
  std::variant<bool, double, std::string, Array, Table> v_;
};

/// Throws std::runtime_error with "source:line:" context on syntax errors.
Table parse(const std::string & text, const std::string & source_name = "<string>");
Table parse_file(const std::string & path);

}  // namespace adaptune::toml
