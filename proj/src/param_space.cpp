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

#include "adaptune/logging.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace adaptune {

namespace {
constexpr double kGridEps = 1e-9;

[[noreturn]] void fail(const std::string & msg) { throw std::invalid_argument(msg); }
}  // namespace

std::string to_string(ParamKind kind)
{
  switch (kind) {
    case ParamKind::kUniform:
      return "uniform";
    case ParamKind::kLogUniform:
      return "log_uniform";
    case ParamKind::kDiscrete:
      return "discrete";
    default:
      return "categorical";
  }
}

ParamKind param_kind_from_string(const std::string & s)
{
  if (s == "uniform") return ParamKind::kUniform;
  if (s == "log_uniform") return ParamKind::kLogUniform;
  if (s == "discrete") return ParamKind::kDiscrete;
  if (s == "categorical") return ParamKind::kCategorical;
  fail("unknown parameter kind '" + s + "'");
}

ParameterSpec ParameterSpec::Uniform(std::string name, double lo, double hi)
{
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ParamKind::kUniform;
  s.lo = lo;
  s.hi = hi;
  s.validate();
  return s;
}

ParameterSpec ParameterSpec::LogUniform(std::string name, double lo, double hi)
{
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ParamKind::kLogUniform;
  s.lo = lo;
  s.hi = hi;
  s.validate();
  return s;
}

ParameterSpec ParameterSpec::Discrete(std::string name, double lo, double hi, double step)
{
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ParamKind::kDiscrete;
  s.lo = lo;
  s.hi = hi;
  s.step = step;
  s.validate();
  return s;
}

ParameterSpec ParameterSpec::Categorical(std::string name, std::vector<std::string> labels)
{
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ParamKind::kCategorical;
  s.labels = std::move(labels);
  s.validate();
  return s;
}

void ParameterSpec::validate() const
{
  if (name.empty()) {
    fail("parameter spec has an empty name");
  }
  switch (kind) {
    case ParamKind::kUniform:
      if (!(lo < hi)) fail("parameter '" + name + "': lo must be < hi");
      break;
    case ParamKind::kLogUniform:
      if (!(lo < hi)) fail("parameter '" + name + "': lo must be < hi");
      if (!(lo > 0.0)) fail("parameter '" + name + "': log_uniform requires lo > 0");
      break;
    case ParamKind::kDiscrete:
      if (!(lo < hi)) fail("parameter '" + name + "': lo must be < hi");
      if (!(step > 0.0)) fail("parameter '" + name + "': discrete step must be > 0");
      break;
    case ParamKind::kCategorical:
      if (labels.size() < 2) fail("parameter '" + name + "': categorical needs >= 2 labels");
      break;
  }
}

int ParameterSpec::grid_count() const
{
  if (kind == ParamKind::kDiscrete) {
    return static_cast<int>(std::floor((hi - lo) / step + kGridEps)) + 1;
  }
  if (kind == ParamKind::kCategorical) {
    return static_cast<int>(labels.size());
  }
  return 0;
}

void ParameterSpace::validate() const
{
  std::set<std::string> names;
  for (const ParameterSpec & spec : specs) {
    spec.validate();
    if (!names.insert(spec.name).second) {
      fail("duplicate parameter name '" + spec.name + "'");
    }
  }
}

int ParameterSpace::index_of(const std::string & name) const
{
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].name == name) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

nlohmann::json ParameterSpace::to_json() const
{
  nlohmann::json out = nlohmann::json::array();
  for (const ParameterSpec & spec : specs) {
    nlohmann::json j;
    j["name"] = spec.name;
    j["kind"] = to_string(spec.kind);
    switch (spec.kind) {
      case ParamKind::kCategorical:
        j["labels"] = spec.labels;
        break;
      case ParamKind::kDiscrete:
        j["lo"] = spec.lo;
        j["hi"] = spec.hi;
        j["step"] = spec.step;
        break;
      default:
        j["lo"] = spec.lo;
        j["hi"] = spec.hi;
        break;
    }
    out.push_back(std::move(j));
  }
  return out;
}

ParameterSpace ParameterSpace::from_json(const nlohmann::json & j)
{
  ParameterSpace space;
  for (const nlohmann::json & item : j) {
    ParameterSpec spec;
    spec.name = item.at("name").get<std::string>();
    spec.kind = param_kind_from_string(item.at("kind").get<std::string>());
    if (spec.kind == ParamKind::kCategorical) {
      spec.labels = item.at("labels").get<std::vector<std::string>>();
    } else {
      spec.lo = item.at("lo").get<double>();
      spec.hi = item.at("hi").get<double>();
      if (spec.kind == ParamKind::kDiscrete) {
        spec.step = item.at("step").get<double>();
      }
    }
    spec.validate();
    space.specs.push_back(std::move(spec));
  }
  space.validate();
  return space;
}

namespace {

int label_index(const ParameterSpec & spec, const std::string & label)
{
  const auto it = std::find(spec.labels.begin(), spec.labels.end(), label);
  if (it == spec.labels.end()) {
    fail("parameter '" + spec.name + "': unknown label '" + label + "'");
  }
  return static_cast<int>(it - spec.labels.begin());
}

double numeric_value(const ParameterSpec & spec, const ParamValue & value)
{
  if (!std::holds_alternative<double>(value)) {
    fail("parameter '" + spec.name + "': expected a numeric value");
  }
  return std::get<double>(value);
}

}  // namespace

void validate_vector(const ParameterSpace & space, const ParameterVector & x)
{
  if (x.values.size() != space.size()) {
    fail(
      "parameter vector has " + std::to_string(x.values.size()) + " values, space has " +
      std::to_string(space.size()));
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    encode_value(space.specs[i], x.values[i]);  // throws when out of bounds
  }
}

ParameterVector sample_uniform(const ParameterSpace & space, std::mt19937_64 & rng)
{
  ParameterVector x;
  x.values.reserve(space.size());
  for (const ParameterSpec & spec : space.specs) {
    switch (spec.kind) {
      case ParamKind::kUniform: {
        std::uniform_real_distribution<double> d(spec.lo, spec.hi);
        x.values.emplace_back(d(rng));
        break;
      }
      case ParamKind::kLogUniform: {
        std::uniform_real_distribution<double> d(std::log(spec.lo), std::log(spec.hi));
        x.values.emplace_back(std::exp(d(rng)));
        break;
      }
      case ParamKind::kDiscrete: {
        std::uniform_int_distribution<int> d(0, spec.grid_count() - 1);
        x.values.emplace_back(spec.lo + spec.step * d(rng));
        break;
      }
      case ParamKind::kCategorical: {
        std::uniform_int_distribution<int> d(0, spec.grid_count() - 1);
        x.values.emplace_back(spec.labels[static_cast<std::size_t>(d(rng))]);
        break;
      }
    }
  }
  return x;
}

double encode_value(const ParameterSpec & spec, const ParamValue & value)
{
  switch (spec.kind) {
    case ParamKind::kUniform: {
      const double v = numeric_value(spec, value);
      if (v < spec.lo - kGridEps || v > spec.hi + kGridEps) {
        fail("parameter '" + spec.name + "': value " + std::to_string(v) + " out of bounds");
      }
      return std::clamp((v - spec.lo) / (spec.hi - spec.lo), 0.0, 1.0);
    }
    case ParamKind::kLogUniform: {
      const double v = numeric_value(spec, value);
      if (v < spec.lo * (1.0 - 1e-12) || v > spec.hi * (1.0 + 1e-12)) {
        fail("parameter '" + spec.name + "': value " + std::to_string(v) + " out of bounds");
      }
      return std::clamp(
        (std::log(v) - std::log(spec.lo)) / (std::log(spec.hi) - std::log(spec.lo)), 0.0, 1.0);
    }
    case ParamKind::kDiscrete: {
      const double v = numeric_value(spec, value);
      const double raw_index = (v - spec.lo) / spec.step;
      const double rounded = std::round(raw_index);
      if (std::abs(raw_index - rounded) > 1e-6) {
        fail("parameter '" + spec.name + "': value " + std::to_string(v) + " is not on the grid");
      }
      const int count = spec.grid_count();
      if (rounded < -0.5 || rounded > count - 0.5) {
        fail("parameter '" + spec.name + "': value " + std::to_string(v) + " out of bounds");
      }
      return rounded / static_cast<double>(count - 1);
    }
    default: {
      if (!std::holds_alternative<std::string>(value)) {
        fail("parameter '" + spec.name + "': expected a label");
      }
      const int idx = label_index(spec, std::get<std::string>(value));
      return static_cast<double>(idx) / static_cast<double>(spec.grid_count() - 1);
    }
  }
}

ParamValue decode_value(const ParameterSpec & spec, double unit)
{
  if (unit < 0.0 || unit > 1.0) {
    log::warn("decode: parameter '", spec.name, "': component ", unit, " clamped to [0,1]");
    unit = std::clamp(unit, 0.0, 1.0);
  }
  switch (spec.kind) {
    case ParamKind::kUniform:
      return spec.lo + unit * (spec.hi - spec.lo);
    case ParamKind::kLogUniform:
      return std::exp(std::log(spec.lo) + unit * (std::log(spec.hi) - std::log(spec.lo)));
    case ParamKind::kDiscrete: {
      const int count = spec.grid_count();
      const int idx = static_cast<int>(std::lround(unit * (count - 1)));
      return spec.lo + spec.step * idx;
    }
    default: {
      const int count = spec.grid_count();
      const int idx = static_cast<int>(std::lround(unit * (count - 1)));
      return spec.labels[static_cast<std::size_t>(idx)];
    }
  }
}

std::vector<double> encode(const ParameterSpace & space, const ParameterVector & x)
{
  if (x.values.size() != space.size()) {
    fail(
      "encode: parameter vector has " + std::to_string(x.values.size()) + " values, space has " +
      std::to_string(space.size()));
  }
  std::vector<double> u(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    u[i] = encode_value(space.specs[i], x.values[i]);
  }
  return u;
}

ParameterVector decode(const ParameterSpace & space, const std::vector<double> & unit)
{
  if (unit.size() != space.size()) {
    fail(
      "decode: unit vector has " + std::to_string(unit.size()) + " values, space has " +
      std::to_string(space.size()));
  }
  ParameterVector x;
  x.values.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    x.values.push_back(decode_value(space.specs[i], unit[i]));
  }
  return x;
}

nlohmann::json params_to_json(const ParameterSpace & space, const ParameterVector & x)
{
  validate_vector(space, x);
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const ParameterSpec & spec = space.specs[i];
    if (std::holds_alternative<double>(x.values[i])) {
      j[spec.name] = std::get<double>(x.values[i]);
    } else {
      j[spec.name] = std::get<std::string>(x.values[i]);
    }
  }
  return j;
}

ParameterVector params_from_json(const ParameterSpace & space, const nlohmann::json & j)
{
  ParameterVector x;
  x.values.reserve(space.size());
  for (const ParameterSpec & spec : space.specs) {
    if (!j.contains(spec.name)) {
      fail("missing value for parameter '" + spec.name + "'");
    }
    const nlohmann::json & v = j.at(spec.name);
    if (v.is_string()) {
      x.values.emplace_back(v.get<std::string>());
    } else {
      x.values.emplace_back(v.get<double>());
    }
  }
  validate_vector(space, x);
  return x;
}

std::string params_to_string(const ParameterSpace & space, const ParameterVector & x)
{
  std::ostringstream os;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i > 0) {
      os << ", ";
    }
    os << space.specs[i].name << "=";
    if (std::holds_alternative<double>(x.values[i])) {
      os << std::get<double>(x.values[i]);
    } else {
      os << std::get<std::string>(x.values[i]);
    }
  }
  return os.str();
}

}  // namespace adaptune
