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

#include "adaptune/geometry.hpp"
#include "adaptune/param_space.hpp"
#include "adaptune/sim/toy_odometry.hpp"

#include <string>

namespace adaptune::sim {

/// Any program mapping (point-cloud sequence, parameter set) to a trajectory.
/// Implementations must be deterministic given (sequence, parameters) and
/// return exactly one pose per input frame (unless they flag failure).
class BlackboxOdometry {
public:
  virtual ~BlackboxOdometry() = default;

  virtual ParameterSpace parameter_space() const = 0;
  virtual OdomRun run(const Sequence & seq, const ParameterVector & x) const = 0;
};

/// The simulator's keyframe NDT odometry.
class ToyNdtBlackbox : public BlackboxOdometry {
public:
  explicit ToyNdtBlackbox(
    ParameterSpace space = OdometryParams::default_space(), ToyOdometryOptions opts = {});

  ParameterSpace parameter_space() const override { return space_; }
  OdomRun run(const Sequence & seq, const ParameterVector & x) const override;

private:
  ParameterSpace space_;
  ToyOdometryOptions opts_;
};

/// Returns the ground truth unchanged; for tests and plumbing checks.
class GtReplayBlackbox : public BlackboxOdometry {
public:
  explicit GtReplayBlackbox(ParameterSpace space);

  ParameterSpace parameter_space() const override { return space_; }
  OdomRun run(const Sequence & seq, const ParameterVector & x) const override;

private:
  ParameterSpace space_;
};

/// Subprocess protocol: `cmd <seq_dir> <params.json> <out_traj.txt>`, where
/// params.json maps parameter names to raw values and the output is a KITTI
/// trajectory. A nonzero exit code means the run diverged. Sequences not yet
/// on disk are written to a scratch directory first.
class ExternalBlackbox : public BlackboxOdometry {
public:
  ExternalBlackbox(std::string command, ParameterSpace space, std::string scratch_dir = "");

  ParameterSpace parameter_space() const override { return space_; }
  OdomRun run(const Sequence & seq, const ParameterVector & x) const override;

private:
  std::string command_;
  ParameterSpace space_;
  std::string scratch_dir_;
};

}  // namespace adaptune::sim
