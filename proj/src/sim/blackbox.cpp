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

#include "adaptune/sim/blackbox.hpp"

#include "adaptune/logging.hpp"
#include "adaptune/trajectory_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace adaptune::sim {

ToyNdtBlackbox::ToyNdtBlackbox(ParameterSpace space, ToyOdometryOptions opts)
: space_(std::move(space)), opts_(opts)
{
  space_.validate();
}

OdomRun ToyNdtBlackbox::run(const Sequence & seq, const ParameterVector & x) const
{
  return run_toy_odometry(seq, OdometryParams::from_vector(space_, x), opts_);
}

GtReplayBlackbox::GtReplayBlackbox(ParameterSpace space) : space_(std::move(space))
{
  space_.validate();
}

OdomRun GtReplayBlackbox::run(const Sequence & seq, const ParameterVector & x) const
{
  validate_vector(space_, x);
  OdomRun run;
  run.trajectory = seq.gt;
  return run;
}

ExternalBlackbox::ExternalBlackbox(
  std::string command, ParameterSpace space, std::string scratch_dir)
: command_(std::move(command)), space_(std::move(space)), scratch_dir_(std::move(scratch_dir))
{
  space_.validate();
  if (command_.empty()) {
    throw std::invalid_argument("external blackbox: empty command");
  }
  if (scratch_dir_.empty()) {
    scratch_dir_ = (fs::temp_directory_path() / "adaptune_external").string();
  }
}

OdomRun ExternalBlackbox::run(const Sequence & seq, const ParameterVector & x) const
{
  validate_vector(space_, x);
  fs::create_directories(scratch_dir_);

  std::string seq_dir = seq.source_dir;
  if (seq_dir.empty() || !fs::is_directory(seq_dir)) {
    seq_dir = (fs::path(scratch_dir_) / ("seq_" + seq.id)).string();
    if (!fs::exists(fs::path(seq_dir) / "poses.txt")) {
      save_sequence(seq, seq_dir);
    }
  }

  const std::string params_path = (fs::path(scratch_dir_) / (seq.id + "_params.json")).string();
  {
    std::ofstream out(params_path);
    if (!out) {
      throw std::runtime_error("cannot write '" + params_path + "'");
    }
    out << params_to_json(space_, x).dump() << '\n';
  }
  const std::string traj_path = (fs::path(scratch_dir_) / (seq.id + "_traj.txt")).string();
  std::error_code ec;
  fs::remove(traj_path, ec);

  const std::string cmdline =
    command_ + " '" + seq_dir + "' '" + params_path + "' '" + traj_path + "'";
  const int status = std::system(cmdline.c_str());

  OdomRun run;
  if (status != 0) {
    log::warn("external blackbox exited with status ", status, "; treating the run as diverged");
    run.failed = true;
    run.divergences = 1;
    return run;
  }
  run.trajectory = load_trajectory(traj_path, TrajectoryFormat::kKitti);
  if (run.trajectory.size() != seq.size()) {
    log::warn(
      "external blackbox returned ", run.trajectory.size(), " poses for ", seq.size(),
      " frames; treating the run as diverged");
    run.failed = true;
    run.divergences = 1;
  }
  return run;
}

}  // namespace adaptune::sim
