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

#include "adaptune/pipeline/config.hpp"
#include "adaptune/pipeline/report.hpp"
#include "adaptune/pipeline/trial_db.hpp"
#include "adaptune/sim/blackbox.hpp"
#include "adaptune/surrogate.hpp"
#include "adaptune/tpe.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace adaptune {

/// Everything the offline modeling phase produces.
struct OfflineArtifacts {
  TrialDatabase db;
  PcaModel pca;
  KnnSurrogate surrogate;
  std::map<std::string, History> histories;  // per training sequence
};

/// Offline parameter-error modeling:
///   1. fit the descriptor PCA on all frames of all training sequences,
///   2. per sequence, SMBO-sample cfg.n_trials parameter sets, run the black
///      box, and record per-frame labels,
///   3. fit the k-NN surrogate on all (descriptor, parameters) -> label pairs.
/// Independent sequences evaluate concurrently; results are assembled in
/// sequence order so the artifacts are reproducible byte for byte.
OfflineArtifacts offline_model(
  const std::vector<Sequence> & train_seqs, const PipelineConfig & cfg, std::uint64_t seed);

/// SMBO over the mean of per-sequence mean errors; returns the best trial's
/// parameter vector. Throws when every trial failed.
ParameterVector tune_fixed(
  const std::vector<Sequence> & train_seqs, const PipelineConfig & cfg, std::uint64_t seed,
  History * history_out = nullptr);

/// Single run with a fixed parameter set.
RunResult run_fixed(
  const Sequence & seq, const ParameterVector & x, const PipelineConfig & cfg,
  std::uint64_t seed, const std::string & method = "fixed");

/// Adaptive run: every cfg.online.update_period frames the current frame's
/// descriptor selects new parameters via surrogate minimization; they apply
/// from the next frame with black-box state preserved. Requires a steppable
/// black box (toy_ndt, gt_replay, or analytic).
RunResult run_adaptive(
  const Sequence & seq, const KnnSurrogate & surrogate, const PcaModel & pca,
  const PipelineConfig & cfg, std::uint64_t seed, const std::string & method = "adaptive");

/// Trajectory-producing black box per the config (toy_ndt, external,
/// gt_replay). Throws for the analytic kind, which produces no trajectories.
std::unique_ptr<sim::BlackboxOdometry> make_blackbox(const PipelineConfig & cfg);

/// Writes report.json, timings.json, rte.csv, and trajectory_<method>.txt
/// (when a trajectory exists) into out_dir.
void write_run_artifacts(
  const RunResult & result, const PipelineConfig & cfg, const std::string & out_dir);

}  // namespace adaptune
