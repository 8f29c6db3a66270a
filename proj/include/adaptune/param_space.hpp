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

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace adaptune {

enum class ParamKind { kUniform, kLogUniform, kDiscrete, kCategorical };

std::string to_string(ParamKind kind);
ParamKind param_kind_from_string(const std::string & s);

/// One named, bounded tuning dimension.
struct ParameterSpec {
  std::string name;
  ParamKind kind = ParamKind::kUniform;
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;                // discrete only
  std::vector<std::string> labels;  // categorical only

  static ParameterSpec Uniform(std::string name, double lo, double hi);
  static ParameterSpec LogUniform(std::string name, double lo, double hi);
  static ParameterSpec Discrete(std::string name, double lo, double hi, double step);
  static ParameterSpec Categorical(std::string name, std::vector<std::string> labels);

  /// Throws std::invalid_argument on a malformed spec.
  void validate() const;

  /// Number of grid points (discrete) or labels (categorical).
  int grid_count() const;
};

/// Ordered list of specs; the order defines the encoding order.
struct ParameterSpace {
  std::vector<ParameterSpec> specs;

  std::size_t size() const { return specs.size(); }
  void validate() const;
  int index_of(const std::string & name) const;  // -1 when absent

  nlohmann::json to_json() const;
  static ParameterSpace from_json(const nlohmann::json & j);
};

/// A raw value: double for numeric kinds, label for categorical.
using ParamValue = std::variant<double, std::string>;

/// One point of the space, raw values in spec order.
struct ParameterVector {
  std::vector<ParamValue> values;

  bool operator==(const ParameterVector &) const = default;
};

/// Throws std::invalid_argument when x does not satisfy the space.
void validate_vector(const ParameterSpace & space, const ParameterVector & x);

/// Independent draw from each dimension's prior (uniform in value, in
/// log-value, over grid points, or over labels).
ParameterVector sample_uniform(const ParameterSpace & space, std::mt19937_64 & rng);

/// Canonical [0,1]^d coordinates. Throws on out-of-bounds values.
std::vector<double> encode(const ParameterSpace & space, const ParameterVector & x);

/// Inverse of encode; discrete/categorical dimensions round to the nearest
/// grid point. Components outside [0,1] are clamped with a warning.
ParameterVector decode(const ParameterSpace & space, const std::vector<double> & unit);

double encode_value(const ParameterSpec & spec, const ParamValue & value);
ParamValue decode_value(const ParameterSpec & spec, double unit);

/// JSON object mapping parameter names to raw values, and back.
nlohmann::json params_to_json(const ParameterSpace & space, const ParameterVector & x);
ParameterVector params_from_json(const ParameterSpace & space, const nlohmann::json & j);

std::string params_to_string(const ParameterSpace & space, const ParameterVector & x);

}  // namespace adaptune
