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

#include "adaptune/logging.hpp"
#include "adaptune/pipeline/pipeline.hpp"
#include "adaptune/seeding.hpp"
#include "adaptune/trajectory_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace adaptune;

namespace {

PipelineConfig load_config(const std::string & path)
{
  if (path.empty()) {
    throw std::runtime_error("--config is required for this command");
  }
  return PipelineConfig::load(path);
}

std::vector<Sequence> load_sequences(const std::vector<std::string> & dirs)
{
  std::vector<Sequence> seqs;
  seqs.reserve(dirs.size());
  for (const std::string & dir : dirs) {
    log::info("loading sequence ", dir);
    seqs.push_back(load_sequence(dir));
  }
  return seqs;
}

void write_json(const nlohmann::json & j, const std::string & path, int indent = 2)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << j.dump(indent) << '\n';
}

void save_params(
  const ParameterSpace & space, const ParameterVector & x, const std::string & path)
{
  nlohmann::json j;
  j["format"] = "adaptune.params.v1";
  j["space"] = space.to_json();
  j["values"] = params_to_json(space, x);
  write_json(j, path);
}

ParameterVector load_params(const ParameterSpace & space, const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open params file '" + path + "'");
  }
  nlohmann::json j;
  in >> j;
  if (j.value("format", "") != "adaptune.params.v1") {
    throw std::runtime_error("params file: unknown format tag");
  }
  return params_from_json(space, j.at("values"));
}

int cmd_simgen(
  const PipelineConfig & cfg, const std::string & out_dir, const std::string & id,
  std::uint64_t seed, std::uint64_t world_seed, const std::vector<std::string> & world_names)
{
  SimulationConfig sim_cfg = cfg.sim;
  if (!world_names.empty()) {
    sim_cfg.worlds.clear();
    for (const std::string & name : world_names) {
      sim_cfg.worlds.push_back(sim::world_kind_from_string(name));
    }
  }
  if (world_seed != 0) {
    sim_cfg.world_seed = world_seed;
  }
  const sim::CompositeWorld world = sim::CompositeWorld::chain(sim_cfg.worlds, sim_cfg.world_seed);
  sim::PathConfig path;
  path.waypoints = sim_cfg.waypoints;
  path.speed = sim_cfg.speed;
  const Sequence seq = sim::generate_sequence(world, path, sim_cfg.sensor, seed, id);
  const std::string dir = (fs::path(out_dir) / id).string();
  save_sequence(seq, dir);
  log::info("wrote ", seq.size(), " frames to ", dir);
  return 0;
}

int cmd_tune_offline(
  const PipelineConfig & cfg, const std::string & out_dir,
  const std::vector<std::string> & seq_dirs, std::uint64_t seed)
{
  const std::vector<Sequence> seqs = load_sequences(seq_dirs);
  const OfflineArtifacts artifacts = offline_model(seqs, cfg, seed);
  fs::create_directories(out_dir);
  const fs::path root(out_dir);
  artifacts.db.save_jsonl((root / "trials.jsonl").string());
  artifacts.pca.save((root / "pca.json").string());
  artifacts.surrogate.save((root / "surrogate.json").string());
  for (const auto & [id, history] : artifacts.histories) {
    save_history(history, cfg.space, (root / ("history_" + id + ".jsonl")).string());
  }
  log::info(
    "offline model: ", artifacts.db.records.size(), " trials, ",
    artifacts.db.sample_count(), " training samples");
  return 0;
}

int cmd_tune_fixed(
  const PipelineConfig & cfg, const std::string & out_dir,
  const std::vector<std::string> & seq_dirs, std::uint64_t seed)
{
  const std::vector<Sequence> seqs = load_sequences(seq_dirs);
  History history;
  const ParameterVector best = tune_fixed(seqs, cfg, seed, &history);
  fs::create_directories(out_dir);
  const fs::path root(out_dir);
  save_params(cfg.space, best, (root / "params.json").string());
  save_history(history, cfg.space, (root / "history.jsonl").string());
  log::info("tuned fixed parameters: ", params_to_string(cfg.space, best));
  return 0;
}

int cmd_run_fixed(
  const PipelineConfig & cfg, const std::string & out_dir, const std::string & seq_dir,
  const std::string & params_path, std::uint64_t seed)
{
  const Sequence seq = load_sequence(seq_dir);
  const ParameterVector x =
    params_path.empty() ? cfg.initial_parameters() : load_params(cfg.space, params_path);
  const RunResult result = run_fixed(seq, x, cfg, seed);
  write_run_artifacts(result, cfg, out_dir);
  std::cout << "sequence " << seq.id << ": mean error " << result.report.mean_error
            << (result.report.metric == "rte" ? " %RTE" : " (analytic)") << "\n";
  return 0;
}

int cmd_run_adaptive(
  const PipelineConfig & cfg, const std::string & out_dir, const std::string & seq_dir,
  const std::string & surrogate_path, const std::string & pca_path, std::uint64_t seed)
{
  const Sequence seq = load_sequence(seq_dir);
  const KnnSurrogate surrogate = KnnSurrogate::load(surrogate_path);
  const PcaModel pca = PcaModel::load(pca_path);
  const RunResult result = run_adaptive(seq, surrogate, pca, cfg, seed);
  write_run_artifacts(result, cfg, out_dir);
  std::cout << "sequence " << seq.id << ": mean error " << result.report.mean_error
            << (result.report.metric == "rte" ? " %RTE" : " (analytic)") << ", "
            << result.report.timeline.size() << " parameter updates\n";
  return 0;
}

int cmd_evaluate(
  const std::string & out_dir, const std::vector<std::string> & report_paths,
  const std::string & baseline)
{
  std::vector<RunReport> reports;
  reports.reserve(report_paths.size());
  for (const std::string & path : report_paths) {
    reports.push_back(RunReport::load(path));
  }
  const nlohmann::json comparison = evaluate_reports(reports, baseline);
  const std::string csv = comparison_to_csv(comparison);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_json(comparison, (fs::path(out_dir) / "comparison.json").string());
    std::ofstream out(fs::path(out_dir) / "comparison.csv");
    out << csv;
  }
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"adaptune: adaptive hyperparameter tuning for black-box LiDAR odometry"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool verbose = false;
  app.add_option("--config", config_path, "TOML pipeline configuration");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "master random seed");
  app.add_flag("--verbose", verbose, "enable debug logging");

  auto * simgen = app.add_subcommand("simgen", "generate a simulated sequence directory");
  std::string sim_id = "seq";
  std::uint64_t world_seed = 0;
  std::vector<std::string> world_names;
  simgen->add_option("--id", sim_id, "sequence id (directory name)");
  simgen->add_option("--world-seed", world_seed, "override the world geometry seed");
  simgen->add_option("--worlds", world_names, "world kinds, e.g. cave open street");

  auto * tune_offline =
    app.add_subcommand("tune-offline", "offline parameter-error modeling on training sequences");
  std::vector<std::string> offline_dirs;
  tune_offline->add_option("sequences", offline_dirs, "training sequence directories")
    ->required();

  auto * tune_fixed_cmd =
    app.add_subcommand("tune-fixed", "tune one fixed parameter set on training sequences");
  std::vector<std::string> fixed_dirs;
  tune_fixed_cmd->add_option("sequences", fixed_dirs, "training sequence directories")
    ->required();

  auto * run_fixed_cmd = app.add_subcommand("run-fixed", "run the black box with fixed parameters");
  std::string run_seq_dir;
  std::string params_path;
  run_fixed_cmd->add_option("sequence", run_seq_dir, "sequence directory")->required();
  run_fixed_cmd->add_option("--params", params_path, "params.json (defaults to config initial)");

  auto * run_adaptive_cmd =
    app.add_subcommand("run-adaptive", "run with per-environment parameter selection");
  std::string adaptive_seq_dir;
  std::string surrogate_path;
  std::string pca_path;
  run_adaptive_cmd->add_option("sequence", adaptive_seq_dir, "sequence directory")->required();
  run_adaptive_cmd->add_option("--surrogate", surrogate_path, "surrogate.json")->required();
  run_adaptive_cmd->add_option("--pca", pca_path, "pca.json")->required();

  auto * evaluate_cmd = app.add_subcommand("evaluate", "compare run reports against a baseline");
  std::vector<std::string> report_paths;
  std::string baseline_method;
  evaluate_cmd->add_option("reports", report_paths, "report.json files")->required();
  evaluate_cmd->add_option("--baseline", baseline_method, "baseline method name");

  CLI11_PARSE(app, argc, argv);
  if (verbose) {
    log::set_level(log::Level::kDebug);
  }

  try {
    if (simgen->parsed()) {
      return cmd_simgen(load_config(config_path), out_dir, sim_id, seed, world_seed, world_names);
    }
    if (tune_offline->parsed()) {
      return cmd_tune_offline(load_config(config_path), out_dir, offline_dirs, seed);
    }
    if (tune_fixed_cmd->parsed()) {
      return cmd_tune_fixed(load_config(config_path), out_dir, fixed_dirs, seed);
    }
    if (run_fixed_cmd->parsed()) {
      return cmd_run_fixed(load_config(config_path), out_dir, run_seq_dir, params_path, seed);
    }
    if (run_adaptive_cmd->parsed()) {
      return cmd_run_adaptive(
        load_config(config_path), out_dir, adaptive_seq_dir, surrogate_path, pca_path, seed);
    }
    if (evaluate_cmd->parsed()) {
      return cmd_evaluate(out_dir, report_paths, baseline_method);
    }
  } catch (const std::exception & e) {
    log::error(e.what());
    return 1;
  }
  return 0;
}
