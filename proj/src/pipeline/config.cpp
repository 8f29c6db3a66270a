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

#include "adaptune/pipeline/config.hpp"

#include <stdexcept>

namespace adaptune {

std::string to_string(BlackboxKind kind)
{
  switch (kind) {
    case BlackboxKind::kToyNdt:
      return "toy_ndt";
    case BlackboxKind::kAnalytic:
      return "analytic";
    case BlackboxKind::kExternal:
      return "external";
    default:
      return "gt_replay";
  }
}

BlackboxKind blackbox_kind_from_string(const std::string & s)
{
  if (s == "toy_ndt") return BlackboxKind::kToyNdt;
  if (s == "analytic") return BlackboxKind::kAnalytic;
  if (s == "external") return BlackboxKind::kExternal;
  if (s == "gt_replay") return BlackboxKind::kGtReplay;
  throw std::invalid_argument("unknown blackbox kind '" + s + "'");
}

void PipelineConfig::validate() const
{
  if (space.specs.empty()) {
    throw std::invalid_argument("config: parameter space is empty");
  }
  space.validate();
  tpe.validate();
  descriptor.validate();
  if (n_trials < 1) {
    throw std::invalid_argument("config: n_trials must be >= 1");
  }
  if (!(metrics.label_length > 0.0)) {
    throw std::invalid_argument("config: label_length must be > 0");
  }
  if (metrics.kitti_stride < 1) {
    throw std::invalid_argument("config: kitti_stride must be >= 1");
  }
  if (surrogate.k < 1) {
    throw std::invalid_argument("config: surrogate k must be >= 1");
  }
  if (online.update_period < 1) {
    throw std::invalid_argument("config: update_period must be >= 1");
  }
  if (online.selection_budget < 1) {
    throw std::invalid_argument("config: selection_budget must be >= 1");
  }
  if (online.initial) {
    validate_vector(space, *online.initial);
  }
  if (!(blackbox.failure_rte > 0.0)) {
    throw std::invalid_argument("config: failure_rte must be > 0");
  }
  if (blackbox.kind == BlackboxKind::kExternal && blackbox.external_command.empty()) {
    throw std::invalid_argument("config: external blackbox needs a command");
  }
  if (blackbox.kind == BlackboxKind::kAnalytic) {
    if (blackbox.analytic_envs.empty()) {
      throw std::invalid_argument("config: analytic blackbox needs at least one environment");
    }
    // Constructing the blackbox validates optima against the space.
    sim::AnalyticBlackbox check(space, blackbox.analytic_envs, blackbox.analytic_noise_sigma);
  }
  sim.sensor.validate();
  if (!(sim.speed > 0.0)) {
    throw std::invalid_argument("config: simulation speed must be > 0");
  }
}

ParameterVector PipelineConfig::initial_parameters() const
{
  if (online.initial) {
    return *online.initial;
  }
  return decode(space, std::vector<double>(space.size(), 0.5));
}

namespace {

ParameterSpace parse_space(const toml::Table & table)
{
  ParameterSpace space;
  std::vector<std::string> order;
  if (const toml::Value * v = table.find("order"); v != nullptr) {
    order = v->as_string_array();
  } else {
    for (const auto & [key, value] : table.entries()) {
      if (value.is_table()) {
        order.push_back(key);
      }
    }
  }
  if (order.empty()) {
    throw std::runtime_error("config: [space] declares no parameters");
  }
  for (const std::string & name : order) {
    const toml::Value * v = table.find(name);
    if (v == nullptr || !v->is_table()) {
      throw std::runtime_error("config: [space." + name + "] is missing");
    }
    const toml::Table & t = v->as_table();
    const std::string kind = t.get_string("kind", "uniform");
    ParameterSpec spec;
    if (kind == "uniform") {
      spec = ParameterSpec::Uniform(name, t.at("lo").as_double(), t.at("hi").as_double());
    } else if (kind == "log_uniform") {
      spec = ParameterSpec::LogUniform(name, t.at("lo").as_double(), t.at("hi").as_double());
    } else if (kind == "discrete") {
      spec = ParameterSpec::Discrete(
        name, t.at("lo").as_double(), t.at("hi").as_double(), t.at("step").as_double());
    } else if (kind == "categorical") {
      spec = ParameterSpec::Categorical(name, t.at("labels").as_string_array());
    } else {
      throw std::runtime_error("config: unknown parameter kind '" + kind + "'");
    }
    space.specs.push_back(std::move(spec));
  }
  space.validate();
  return space;
}

void parse_descriptor(const toml::Table & t, DescriptorConfig & cfg)
{
  cfg.voxel_size = t.get_double("voxel_size", cfg.voxel_size);
  cfg.min_points = t.get_int("min_points", cfg.min_points);
  cfg.range_bin = t.get_double("range_bin", cfg.range_bin);
  cfg.n_bins = t.get_int("n_bins", cfg.n_bins);
  cfg.pca_dim = t.get_int("pca_dim", cfg.pca_dim);
  cfg.classifier.eigen_ratio_threshold =
    t.get_double("t_e", cfg.classifier.eigen_ratio_threshold);
  if (const toml::Value * v = t.find("tilt_edges"); v != nullptr) {
    const std::vector<double> edges = v->as_double_array();
    if (edges.size() != 2) {
      throw std::runtime_error("config: tilt_edges needs exactly 2 values");
    }
    cfg.classifier.tilt_edges_deg = {edges[0], edges[1]};
  }
  if (const toml::Value * v = t.find("ratio_edges"); v != nullptr) {
    const std::vector<double> edges = v->as_double_array();
    if (edges.size() != 2) {
      throw std::runtime_error("config: ratio_edges needs exactly 2 values");
    }
    cfg.classifier.sphere_ratio_edges = {edges[0], edges[1]};
  }
}

void parse_blackbox(const toml::Table & t, const ParameterSpace & space, BlackboxConfig & cfg)
{
  cfg.kind = blackbox_kind_from_string(t.get_string("kind", to_string(cfg.kind)));
  cfg.failure_rte = t.get_double("failure_rte", cfg.failure_rte);
  cfg.external_command = t.get_string("command", cfg.external_command);
  if (const toml::Value * v = t.find("toy"); v != nullptr) {
    const toml::Table & toy = v->as_table();
    cfg.toy.max_source_points = toy.get_int("max_source_points", cfg.toy.max_source_points);
    cfg.toy.grid_min_points = toy.get_int("grid_min_points", cfg.toy.grid_min_points);
    cfg.toy.max_iterations = toy.get_int("max_iterations", cfg.toy.max_iterations);
    cfg.toy.tolerance = toy.get_double("tolerance", cfg.toy.tolerance);
  }
  if (const toml::Value * v = t.find("analytic"); v != nullptr) {
    const toml::Table & analytic = v->as_table();
    cfg.analytic_noise_sigma = analytic.get_double("noise_sigma", cfg.analytic_noise_sigma);
    if (const toml::Value * e = analytic.find("envs"); e != nullptr) {
      for (const auto & [env_id, env_value] : e->as_table().entries()) {
        const toml::Table & env_table = env_value.as_table();
        sim::AnalyticEnv env;
        env.optimum = env_table.at("optimum").as_double_array();
        env.curvature = env_table.get_double("curvature", 1.0);
        env.base = env_table.get_double("base", 0.0);
        cfg.analytic_envs[env_id] = std::move(env);
      }
    }
  }
  (void)space;
}

void parse_simulation(const toml::Table & t, SimulationConfig & cfg)
{
  if (const toml::Value * v = t.find("worlds"); v != nullptr) {
    cfg.worlds.clear();
    for (const std::string & kind : v->as_string_array()) {
      cfg.worlds.push_back(sim::world_kind_from_string(kind));
    }
  }
  cfg.speed = t.get_double("speed", cfg.speed);
  cfg.world_seed = static_cast<std::uint64_t>(t.get_double("world_seed", 0.0));
  if (const toml::Value * v = t.find("waypoints"); v != nullptr) {
    cfg.waypoints.clear();
    for (const toml::Value & wp : v->as_array()) {
      const std::vector<double> coords = wp.as_double_array();
      if (coords.size() != 3) {
        throw std::runtime_error("config: waypoints must be [x, y, z] triples");
      }
      cfg.waypoints.emplace_back(coords[0], coords[1], coords[2]);
    }
  }
  if (const toml::Value * v = t.find("sensor"); v != nullptr) {
    const toml::Table & s = v->as_table();
    cfg.sensor.n_rings = s.get_int("n_rings", cfg.sensor.n_rings);
    cfg.sensor.n_azimuth = s.get_int("n_azimuth", cfg.sensor.n_azimuth);
    cfg.sensor.max_range = s.get_double("max_range", cfg.sensor.max_range);
    cfg.sensor.range_noise = s.get_double("range_noise", cfg.sensor.range_noise);
    cfg.sensor.rate_hz = s.get_double("rate", cfg.sensor.rate_hz);
    if (const toml::Value * fov = s.find("fov"); fov != nullptr) {
      const std::vector<double> edges = fov->as_double_array();
      if (edges.size() != 2) {
        throw std::runtime_error("config: sensor fov needs [low, high] degrees");
      }
      cfg.sensor.fov_low_deg = edges[0];
      cfg.sensor.fov_high_deg = edges[1];
    }
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_toml(const toml::Table & table)
{
  PipelineConfig cfg;
  if (const toml::Value * v = table.find("space"); v != nullptr) {
    cfg.space = parse_space(v->as_table());
  } else {
    throw std::runtime_error("config: missing [space] section");
  }
  if (const toml::Value * v = table.find("smbo"); v != nullptr) {
    const toml::Table & t = v->as_table();
    cfg.n_trials = t.get_int("n_trials", cfg.n_trials);
    cfg.tpe.n_startup = t.get_int("n_startup", cfg.tpe.n_startup);
    cfg.tpe.n_candidates = t.get_int("n_candidates", cfg.tpe.n_candidates);
    cfg.tpe.gamma = t.get_double("gamma", cfg.tpe.gamma);
    cfg.tpe.seed = static_cast<std::uint64_t>(t.get_double("seed", 0.0));
  }
  if (const toml::Value * v = table.find("descriptor"); v != nullptr) {
    parse_descriptor(v->as_table(), cfg.descriptor);
  }
  if (const toml::Value * v = table.find("metrics"); v != nullptr) {
    const toml::Table & t = v->as_table();
    cfg.metrics.label_length = t.get_double("label_length", cfg.metrics.label_length);
    cfg.metrics.kitti_stride = t.get_int("kitti_stride", cfg.metrics.kitti_stride);
  }
  if (const toml::Value * v = table.find("surrogate"); v != nullptr) {
    cfg.surrogate.k = v->as_table().get_int("k", cfg.surrogate.k);
  }
  if (const toml::Value * v = table.find("online"); v != nullptr) {
    const toml::Table & t = v->as_table();
    cfg.online.update_period = t.get_int("update_period", cfg.online.update_period);
    cfg.online.selection_budget = t.get_int("selection_budget", cfg.online.selection_budget);
    if (const toml::Value * init = t.find("initial"); init != nullptr) {
      nlohmann::json j = nlohmann::json::object();
      for (const auto & [key, value] : init->as_table().entries()) {
        if (value.is_string()) {
          j[key] = value.as_string();
        } else {
          j[key] = value.as_double();
        }
      }
      cfg.online.initial = params_from_json(cfg.space, j);
    }
  }
  if (const toml::Value * v = table.find("blackbox"); v != nullptr) {
    parse_blackbox(v->as_table(), cfg.space, cfg.blackbox);
  }
  if (const toml::Value * v = table.find("simulation"); v != nullptr) {
    parse_simulation(v->as_table(), cfg.sim);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string & path)
{
  return from_toml(toml::parse_file(path));
}

}  // namespace adaptune
