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

#include "adaptune/pipeline/pipeline.hpp"

#include "adaptune/logging.hpp"
#include "adaptune/seeding.hpp"
#include "adaptune/trajectory_io.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <stdexcept>

namespace fs = std::filesystem;

namespace adaptune {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Number of leading frames that still have a full-length segment.
std::size_t frames_with_segment(const Trajectory & gt, double length_m)
{
  if (gt.empty()) {
    return 0;
  }
  std::vector<double> arc(gt.size(), 0.0);
  for (std::size_t i = 1; i < gt.size(); ++i) {
    arc[i] = arc[i - 1] + (gt.poses[i].translation - gt.poses[i - 1].translation).norm();
  }
  const double total = arc.back();
  std::size_t count = 0;
  while (count < gt.size() && total - arc[count] >= length_m) {
    ++count;
  }
  return count;
}

struct TrialEvaluation {
  double trial_y = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  int divergences = 0;
  std::vector<FrameLabel> per_frame;
};

class TrialEvaluator {
public:
  virtual ~TrialEvaluator() = default;
  virtual TrialEvaluation evaluate(
    const Sequence & seq, const ParameterVector & x, std::mt19937_64 & rng) const = 0;
};

class MetricEvaluator : public TrialEvaluator {
public:
  MetricEvaluator(std::shared_ptr<const sim::BlackboxOdometry> box, double label_length)
  : box_(std::move(box)), label_length_(label_length)
  {
  }

  TrialEvaluation evaluate(
    const Sequence & seq, const ParameterVector & x, std::mt19937_64 &) const override
  {
    TrialEvaluation ev;
    sim::OdomRun run = box_->run(seq, x);
    ev.divergences = run.divergences;
    bool ok = !run.failed && run.trajectory.size() == seq.size();
    if (ok) {
      for (const Pose & p : run.trajectory.poses) {
        if (!p.translation.allFinite() || !p.rotation.allFinite()) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      // Divergence is the strongest negative signal: keep the trial with its
      // per-frame labels pinned to the failure ceiling.
      ev.failed = true;
      const std::size_t m = frames_with_segment(seq.gt, label_length_);
      ev.per_frame.reserve(m);
      for (std::size_t i = 0; i < m; ++i) {
        ev.per_frame.push_back(FrameLabel{i, std::numeric_limits<double>::infinity()});
      }
      return ev;
    }
    const std::vector<RteSample> samples = per_frame_rtes(seq.gt, run.trajectory, label_length_);
    ev.per_frame.reserve(samples.size());
    double sum = 0.0;
    for (const RteSample & s : samples) {
      ev.per_frame.push_back(FrameLabel{s.frame, s.value_percent});
      sum += s.value_percent;
    }
    if (samples.empty()) {
      ev.failed = true;
      return ev;
    }
    ev.trial_y = sum / static_cast<double>(samples.size());
    ev.failed = !std::isfinite(ev.trial_y);
    return ev;
  }

private:
  std::shared_ptr<const sim::BlackboxOdometry> box_;
  double label_length_;
};

class AnalyticEvaluator : public TrialEvaluator {
public:
  explicit AnalyticEvaluator(std::shared_ptr<const sim::AnalyticBlackbox> box)
  : box_(std::move(box))
  {
  }

  TrialEvaluation evaluate(
    const Sequence & seq, const ParameterVector & x, std::mt19937_64 & rng) const override
  {
    if (seq.frame_labels.empty()) {
      throw std::runtime_error(
        "analytic blackbox: sequence '" + seq.id +
        "' has no per-frame environment labels (envs.txt)");
    }
    // One noise draw per trial, so per-frame labels stay constant within a
    // single-environment trial.
    double noise = 0.0;
    if (box_->noise_sigma() > 0.0) {
      noise = std::normal_distribution<double>(0.0, box_->noise_sigma())(rng);
    }
    TrialEvaluation ev;
    ev.per_frame.reserve(seq.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const double y = box_->error(seq.frame_labels[i], x, noise);
      ev.per_frame.push_back(FrameLabel{i, y});
      sum += y;
    }
    ev.trial_y = sum / static_cast<double>(seq.size());
    return ev;
  }

private:
  std::shared_ptr<const sim::AnalyticBlackbox> box_;
};

std::unique_ptr<TrialEvaluator> make_evaluator(const PipelineConfig & cfg)
{
  if (cfg.blackbox.kind == BlackboxKind::kAnalytic) {
    return std::make_unique<AnalyticEvaluator>(std::make_shared<sim::AnalyticBlackbox>(
      cfg.space, cfg.blackbox.analytic_envs, cfg.blackbox.analytic_noise_sigma));
  }
  return std::make_unique<MetricEvaluator>(
    std::shared_ptr<const sim::BlackboxOdometry>(make_blackbox(cfg)), cfg.metrics.label_length);
}

void require_labelable(const std::vector<Sequence> & seqs, const PipelineConfig & cfg)
{
  if (cfg.blackbox.kind == BlackboxKind::kAnalytic) {
    for (const Sequence & seq : seqs) {
      if (seq.frame_labels.empty()) {
        throw std::invalid_argument(
          "sequence '" + seq.id + "' lacks environment labels required by the analytic blackbox");
      }
    }
    return;
  }
  for (const Sequence & seq : seqs) {
    if (frames_with_segment(seq.gt, cfg.metrics.label_length) == 0) {
      throw std::invalid_argument(
        "sequence '" + seq.id + "' is shorter than the label sub-trajectory length (" +
        std::to_string(cfg.metrics.label_length) + " m)");
    }
  }
}

/// Per-sequence offline result, assembled in sequence order after the
/// parallel phase.
struct SequenceTrials {
  std::vector<TrialRecord> records;
  History history;
};

SequenceTrials run_sequence_trials(
  const Sequence & seq, const PipelineConfig & cfg, std::uint64_t seed)
{
  const std::unique_ptr<TrialEvaluator> evaluator = make_evaluator(cfg);
  std::mt19937_64 noise_rng(derive_seed(seed, "noise:" + seq.id));
  SequenceTrials out;
  out.records.reserve(static_cast<std::size_t>(cfg.n_trials));
  const Objective objective = [&](const ParameterVector & x) {
    TrialRecord record;
    record.sequence_id = seq.id;
    record.x = x;
    try {
      const TrialEvaluation ev = evaluator->evaluate(seq, x, noise_rng);
      record.trial_y = ev.trial_y;
      record.failed = ev.failed;
      record.divergences = ev.divergences;
      record.per_frame = ev.per_frame;
    } catch (...) {
      record.failed = true;
      record.trial_y = std::numeric_limits<double>::quiet_NaN();
      out.records.push_back(std::move(record));
      throw;
    }
    out.records.push_back(std::move(record));
    return out.records.back().failed ? std::numeric_limits<double>::quiet_NaN()
                                     : out.records.back().trial_y;
  };
  TpeConfig tpe = cfg.tpe;
  tpe.seed = derive_seed(seed, "offline:" + seq.id);
  out.history = optimize(objective, cfg.space, cfg.n_trials, tpe);
  return out;
}

class OdometryStepper {
public:
  virtual ~OdometryStepper() = default;
  virtual Pose step(const PointCloud & frame, std::size_t index) = 0;
  virtual void apply(const ParameterVector & x) = 0;
  virtual int divergences() const { return 0; }
};

class ToyStepper : public OdometryStepper {
public:
  ToyStepper(const ParameterSpace & space, const ParameterVector & x, sim::ToyOdometryOptions opts)
  : space_(space), odometry_(sim::OdometryParams::from_vector(space, x), opts)
  {
  }

  Pose step(const PointCloud & frame, std::size_t) override { return odometry_.step(frame); }

  void apply(const ParameterVector & x) override
  {
    odometry_.set_params(sim::OdometryParams::from_vector(space_, x));
  }

  int divergences() const override { return odometry_.divergence_count(); }

private:
  const ParameterSpace & space_;
  sim::ToyNdtOdometry odometry_;
};

class GtReplayStepper : public OdometryStepper {
public:
  explicit GtReplayStepper(const Sequence & seq) : seq_(seq) {}

  Pose step(const PointCloud &, std::size_t index) override { return seq_.gt.poses[index]; }
  void apply(const ParameterVector &) override {}

private:
  const Sequence & seq_;
};

void fill_rte_stats(
  const Sequence & seq, const Trajectory & trajectory, const PipelineConfig & cfg,
  RunResult & result)
{
  result.trajectory = trajectory;
  result.rtes = per_frame_rtes(seq.gt, trajectory, cfg.metrics.label_length);
  if (result.rtes.empty()) {
    throw std::runtime_error(
      "sequence '" + seq.id + "' is shorter than the label sub-trajectory length");
  }
  double sum = 0.0;
  double rot = 0.0;
  for (const RteSample & s : result.rtes) {
    sum += s.value_percent;
    rot += s.rotation_deg;
  }
  result.report.mean_error = sum / static_cast<double>(result.rtes.size());
  result.report.mean_rotation_deg = rot / static_cast<double>(result.rtes.size());
  try {
    result.report.kitti =
      kitti_rte(seq.gt, trajectory, static_cast<std::size_t>(cfg.metrics.kitti_stride));
  } catch (const std::exception &) {
    result.report.kitti = std::nullopt;  // path shorter than 100 m
  }
}

}  // namespace

std::unique_ptr<sim::BlackboxOdometry> make_blackbox(const PipelineConfig & cfg)
{
  switch (cfg.blackbox.kind) {
    case BlackboxKind::kToyNdt:
      return std::make_unique<sim::ToyNdtBlackbox>(cfg.space, cfg.blackbox.toy);
    case BlackboxKind::kExternal:
      return std::make_unique<sim::ExternalBlackbox>(cfg.blackbox.external_command, cfg.space);
    case BlackboxKind::kGtReplay:
      return std::make_unique<sim::GtReplayBlackbox>(cfg.space);
    default:
      throw std::invalid_argument("the analytic blackbox produces no trajectories");
  }
}

OfflineArtifacts offline_model(
  const std::vector<Sequence> & train_seqs, const PipelineConfig & cfg, std::uint64_t seed)
{
  cfg.validate();
  if (train_seqs.empty()) {
    throw std::invalid_argument("offline_model: need at least one training sequence");
  }
  std::set<std::string> ids;
  for (const Sequence & seq : train_seqs) {
    seq.validate();
    if (!ids.insert(seq.id).second) {
      throw std::invalid_argument("offline_model: duplicate sequence id '" + seq.id + "'");
    }
  }
  require_labelable(train_seqs, cfg);

  // Phase 1: histograms for every frame, then the PCA basis.
  std::vector<std::vector<RawHistogram>> histograms(train_seqs.size());
  {
    std::vector<std::future<std::vector<RawHistogram>>> futures;
    futures.reserve(train_seqs.size());
    for (const Sequence & seq : train_seqs) {
      futures.push_back(std::async(std::launch::async, [&seq, &cfg]() {
        std::vector<RawHistogram> out;
        out.reserve(seq.size());
        for (const PointCloud & cloud : seq.frames) {
          if (cloud.empty()) {
            out.emplace_back(static_cast<std::size_t>(cfg.descriptor.histogram_size()), 0.0);
          } else {
            out.push_back(compute_histogram(cloud, cfg.descriptor));
          }
        }
        return out;
      }));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) {
      histograms[i] = futures[i].get();
    }
  }
  std::vector<RawHistogram> all;
  for (const auto & hs : histograms) {
    all.insert(all.end(), hs.begin(), hs.end());
  }
  if (static_cast<int>(all.size()) < cfg.descriptor.pca_dim) {
    throw std::runtime_error(
      "offline_model: only " + std::to_string(all.size()) +
      " frames available, PCA needs at least " + std::to_string(cfg.descriptor.pca_dim));
  }

  OfflineArtifacts artifacts;
  artifacts.pca = fit_pca(all, cfg.descriptor);
  artifacts.db.pca_hash = artifacts.pca.hash();
  artifacts.db.space = cfg.space;
  for (std::size_t i = 0; i < train_seqs.size(); ++i) {
    std::vector<EnvDescriptor> descriptors;
    descriptors.reserve(histograms[i].size());
    for (const RawHistogram & h : histograms[i]) {
      descriptors.push_back(transform(artifacts.pca, h));
    }
    artifacts.db.sequences.emplace_back(train_seqs[i].id, std::move(descriptors));
  }

  // Phase 2: SMBO trials, independent sequences in parallel.
  {
    std::vector<std::future<SequenceTrials>> futures;
    futures.reserve(train_seqs.size());
    for (const Sequence & seq : train_seqs) {
      futures.push_back(std::async(
        std::launch::async, [&seq, &cfg, seed]() { return run_sequence_trials(seq, cfg, seed); }));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) {
      SequenceTrials trials = futures[i].get();
      artifacts.histories.emplace(train_seqs[i].id, std::move(trials.history));
      for (TrialRecord & record : trials.records) {
        artifacts.db.records.push_back(std::move(record));
      }
    }
  }

  // Phase 3: the surrogate.
  std::vector<LabeledSample> samples = artifacts.db.to_samples(cfg.blackbox.failure_rte);
  if (samples.size() < static_cast<std::size_t>(cfg.surrogate.k)) {
    throw std::runtime_error(
      "offline_model: " + std::to_string(samples.size()) + " training samples, need >= " +
      std::to_string(cfg.surrogate.k));
  }
  artifacts.surrogate = KnnSurrogate::fit(std::move(samples), cfg.surrogate.k);
  artifacts.surrogate.pca_hash = artifacts.pca.hash();
  return artifacts;
}

ParameterVector tune_fixed(
  const std::vector<Sequence> & train_seqs, const PipelineConfig & cfg, std::uint64_t seed,
  History * history_out)
{
  cfg.validate();
  if (train_seqs.empty()) {
    throw std::invalid_argument("tune_fixed: need at least one training sequence");
  }
  for (const Sequence & seq : train_seqs) {
    seq.validate();
  }
  require_labelable(train_seqs, cfg);

  const std::unique_ptr<TrialEvaluator> evaluator = make_evaluator(cfg);
  std::vector<std::mt19937_64> noise_rngs;
  noise_rngs.reserve(train_seqs.size());
  for (const Sequence & seq : train_seqs) {
    noise_rngs.emplace_back(derive_seed(seed, "fixed_noise:" + seq.id));
  }

  const Objective objective = [&](const ParameterVector & x) {
    std::vector<std::future<TrialEvaluation>> futures;
    futures.reserve(train_seqs.size());
    for (std::size_t i = 0; i < train_seqs.size(); ++i) {
      futures.push_back(std::async(std::launch::async, [&, i]() {
        return evaluator->evaluate(train_seqs[i], x, noise_rngs[i]);
      }));
    }
    double sum = 0.0;
    for (auto & f : futures) {
      const TrialEvaluation ev = f.get();
      // A diverged sequence keeps the trial comparable at the failure ceiling
      // instead of discarding the whole trial.
      sum += ev.failed ? cfg.blackbox.failure_rte : ev.trial_y;
    }
    return sum / static_cast<double>(train_seqs.size());
  };

  TpeConfig tpe = cfg.tpe;
  tpe.seed = derive_seed(seed, "tune_fixed");
  const History history = optimize(objective, cfg.space, cfg.n_trials, tpe);
  const TrialResult * best = history.best();
  if (best == nullptr) {
    throw std::runtime_error("tune_fixed: every trial failed");
  }
  if (history_out != nullptr) {
    *history_out = history;
  }
  return best->x;
}

RunResult run_fixed(
  const Sequence & seq, const ParameterVector & x, const PipelineConfig & cfg, std::uint64_t seed,
  const std::string & method)
{
  cfg.validate();
  seq.validate();
  validate_vector(cfg.space, x);

  RunResult result;
  result.report.sequence_id = seq.id;
  result.report.method = method;
  result.report.label_length = cfg.metrics.label_length;
  result.report.frames = seq.size();
  result.report.timeline.push_back(TimelineEntry{0, x, std::nullopt});

  const auto start = Clock::now();
  if (cfg.blackbox.kind == BlackboxKind::kAnalytic) {
    const sim::AnalyticBlackbox box(
      cfg.space, cfg.blackbox.analytic_envs, cfg.blackbox.analytic_noise_sigma);
    if (seq.frame_labels.empty()) {
      throw std::invalid_argument(
        "sequence '" + seq.id + "' lacks environment labels required by the analytic blackbox");
    }
    std::mt19937_64 rng(derive_seed(seed, "run_fixed:" + seq.id + ":" + method));
    double noise = 0.0;
    if (box.noise_sigma() > 0.0) {
      noise = std::normal_distribution<double>(0.0, box.noise_sigma())(rng);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      sum += box.error(seq.frame_labels[i], x, noise);
    }
    result.report.metric = "analytic";
    result.report.mean_error = sum / static_cast<double>(seq.size());
  } else {
    const std::unique_ptr<sim::BlackboxOdometry> box = make_blackbox(cfg);
    const sim::OdomRun run = box->run(seq, x);
    result.report.divergences = run.divergences;
    if (run.failed || run.trajectory.size() != seq.size()) {
      throw std::runtime_error("run_fixed: black-box run failed on sequence '" + seq.id + "'");
    }
    result.report.metric = "rte";
    fill_rte_stats(seq, run.trajectory, cfg, result);
  }
  result.report.wall_ms = ms_since(start);
  return result;
}

RunResult run_adaptive(
  const Sequence & seq, const KnnSurrogate & surrogate, const PcaModel & pca,
  const PipelineConfig & cfg, std::uint64_t seed, const std::string & method)
{
  cfg.validate();
  seq.validate();
  if (!surrogate.pca_hash.empty() && surrogate.pca_hash != pca.hash()) {
    throw std::invalid_argument(
      "run_adaptive: surrogate was trained with descriptor model " + surrogate.pca_hash +
      ", but the provided model hashes to " + pca.hash());
  }
  if (cfg.blackbox.kind == BlackboxKind::kExternal) {
    throw std::invalid_argument(
      "run_adaptive: the external black-box protocol is whole-run; adaptive selection needs a "
      "steppable black box (toy_ndt, gt_replay, or analytic)");
  }

  const bool analytic = cfg.blackbox.kind == BlackboxKind::kAnalytic;
  std::unique_ptr<sim::AnalyticBlackbox> analytic_box;
  std::unique_ptr<OdometryStepper> stepper;
  ParameterVector current = cfg.initial_parameters();
  if (analytic) {
    analytic_box = std::make_unique<sim::AnalyticBlackbox>(
      cfg.space, cfg.blackbox.analytic_envs, cfg.blackbox.analytic_noise_sigma);
    if (seq.frame_labels.empty()) {
      throw std::invalid_argument(
        "sequence '" + seq.id + "' lacks environment labels required by the analytic blackbox");
    }
  } else if (cfg.blackbox.kind == BlackboxKind::kToyNdt) {
    stepper = std::make_unique<ToyStepper>(cfg.space, current, cfg.blackbox.toy);
  } else {
    stepper = std::make_unique<GtReplayStepper>(seq);
  }

  RunResult result;
  result.report.sequence_id = seq.id;
  result.report.method = method;
  result.report.label_length = cfg.metrics.label_length;
  result.report.frames = seq.size();

  std::mt19937_64 selection_rng(derive_seed(seed, "adaptive:" + seq.id));
  std::mt19937_64 noise_rng(derive_seed(seed, "adaptive_noise:" + seq.id));
  double run_noise = 0.0;
  if (analytic && analytic_box->noise_sigma() > 0.0) {
    run_noise =
      std::normal_distribution<double>(0.0, analytic_box->noise_sigma())(noise_rng);
  }

  TpeConfig selection_cfg = cfg.tpe;
  const std::size_t period = static_cast<std::size_t>(cfg.online.update_period);

  Trajectory trajectory;
  double analytic_sum = 0.0;
  const auto run_start = Clock::now();
  std::optional<ParameterVector> pending;
  for (std::size_t f = 0; f < seq.size(); ++f) {
    if (f % period == 0) {
      const auto t0 = Clock::now();
      const EnvDescriptor descriptor = extract(seq.frames[f], pca);
      const double extract_ms = ms_since(t0);
      const auto t1 = Clock::now();
      try {
        double predicted = 0.0;
        const ParameterVector choice = select_parameters(
          surrogate, descriptor, cfg.space, cfg.online.selection_budget, selection_cfg,
          selection_rng, &predicted);
        pending = choice;
        result.report.timeline.push_back(TimelineEntry{f, choice, predicted});
      } catch (const std::exception & e) {
        log::warn("selection at frame ", f, " failed (", e.what(), "); keeping current x");
      }
      result.report.extract_ms.push_back(extract_ms);
      result.report.selection_ms.push_back(ms_since(t1));
    }
    if (analytic) {
      analytic_sum += analytic_box->error(seq.frame_labels[f], current, run_noise);
    } else {
      trajectory.poses.push_back(stepper->step(seq.frames[f], f));
      trajectory.timestamps.push_back(seq.gt.timestamps[f]);
    }
    // Selections take effect from the next frame.
    if (pending) {
      current = *pending;
      if (stepper) {
        stepper->apply(current);
      }
      pending.reset();
    }
  }

  if (analytic) {
    result.report.metric = "analytic";
    result.report.mean_error = analytic_sum / static_cast<double>(seq.size());
  } else {
    result.report.metric = "rte";
    result.report.divergences = stepper->divergences();
    fill_rte_stats(seq, trajectory, cfg, result);
  }
  result.report.wall_ms = ms_since(run_start);
  return result;
}

void write_run_artifacts(
  const RunResult & result, const PipelineConfig & cfg, const std::string & out_dir)
{
  fs::create_directories(out_dir);
  const fs::path root(out_dir);
  result.report.save(cfg.space, (root / "report.json").string());
  result.report.save_timings((root / "timings.json").string());
  if (!result.rtes.empty()) {
    save_rte_csv(result.rtes, (root / "rte.csv").string());
  }
  if (!result.trajectory.empty()) {
    save_trajectory(
      result.trajectory, (root / ("trajectory_" + result.report.method + ".txt")).string(),
      TrajectoryFormat::kKitti);
  }
}

}  // namespace adaptune
