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

#include "adaptune/tpe.hpp"

#include "adaptune/logging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adaptune {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

std::size_t History::successful_count() const
{
  return static_cast<std::size_t>(std::count_if(
    trials.begin(), trials.end(), [](const TrialResult & t) { return !t.failed; }));
}

const TrialResult * History::best() const
{
  const TrialResult * best = nullptr;
  for (const TrialResult & t : trials) {
    if (t.failed) {
      continue;
    }
    if (best == nullptr || t.y < best->y) {
      best = &t;
    }
  }
  return best;
}

void TpeConfig::validate() const
{
  if (n_startup < 1) {
    throw std::invalid_argument("tpe: n_startup must be >= 1");
  }
  if (n_candidates < 1) {
    throw std::invalid_argument("tpe: n_candidates must be >= 1");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("tpe: gamma must be in (0, 1)");
  }
}

HistorySplit split_history(const History & h, double gamma)
{
  if (h.trials.empty()) {
    throw std::invalid_argument("split_history: empty history");
  }
  std::vector<double> ys;
  ys.reserve(h.size());
  for (const TrialResult & t : h.trials) {
    if (!t.failed) {
      ys.push_back(t.y);
    }
  }
  HistorySplit split;
  if (ys.empty()) {
    // Only failed trials: everything is "bad".
    split.threshold = std::numeric_limits<double>::quiet_NaN();
    split.above = h.trials;
    return split;
  }
  std::sort(ys.begin(), ys.end());
  const std::size_t n = ys.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  split.threshold = ys[rank - 1];
  for (const TrialResult & t : h.trials) {
    if (!t.failed && t.y < split.threshold) {
      split.below.push_back(t);
    } else {
      split.above.push_back(t);
    }
  }
  return split;
}

ParzenEstimator::ParzenEstimator(
  const std::vector<std::vector<double>> & points, std::size_t dim)
{
  count_ = points.size();
  component_weight_ = 1.0 / static_cast<double>(count_ + 1);
  dims_.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    DimModel & model = dims_[d];
    model.locations.reserve(count_);
    for (const std::vector<double> & p : points) {
      if (p.size() != dim) {
        throw std::invalid_argument("parzen: inconsistent point dimensionality");
      }
      model.locations.push_back(p[d]);
    }
    const std::size_t n = model.locations.size();
    double sigma = 0.0;
    if (n >= 2) {
      double mean = 0.0;
      for (double v : model.locations) {
        mean += v;
      }
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (double v : model.locations) {
        ss += (v - mean) * (v - mean);
      }
      sigma = std::sqrt(ss / static_cast<double>(n - 1));
    }
    if (n < 3) {
      sigma = std::max(sigma, 0.05);
    }
    const double scale = n > 0 ? std::pow(static_cast<double>(n), -0.2) : 1.0;
    model.bandwidth = std::max(sigma * scale, 1e-3);
  }
}

double ParzenEstimator::pdf_dim(std::size_t d, double u) const
{
  const DimModel & model = dims_[d];
  double acc = 1.0;  // uniform prior component on [0,1]
  const double bw = model.bandwidth;
  for (double mu : model.locations) {
    const double z_lo = (0.0 - mu) / bw;
    const double z_hi = (1.0 - mu) / bw;
    const double mass = normal_cdf(z_hi) - normal_cdf(z_lo);
    if (mass <= 0.0) {
      continue;
    }
    acc += normal_pdf((u - mu) / bw) / (bw * mass);
  }
  return component_weight_ * acc;
}

double ParzenEstimator::log_pdf(const std::vector<double> & u) const
{
  if (u.size() != dims_.size()) {
    throw std::invalid_argument("parzen: query dimensionality mismatch");
  }
  double acc = 0.0;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    acc += std::log(std::max(pdf_dim(d, u[d]), 1e-300));
  }
  return acc;
}

std::vector<double> ParzenEstimator::sample(std::mt19937_64 & rng) const
{
  std::vector<double> u(dims_.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const DimModel & model = dims_[d];
    std::uniform_int_distribution<std::size_t> pick(0, count_);
    const std::size_t component = pick(rng);
    if (component == count_) {  // uniform prior
      u[d] = unit(rng);
      continue;
    }
    const double mu = model.locations[component];
    double v = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      v = mu + gauss(rng) * model.bandwidth;
      if (v >= 0.0 && v <= 1.0) {
        accepted = true;
        break;
      }
    }
    u[d] = accepted ? v : std::clamp(v, 0.0, 1.0);
  }
  return u;
}

ParameterVector suggest(
  const History & h, const ParameterSpace & space, const TpeConfig & cfg, std::mt19937_64 & rng)
{
  cfg.validate();
  space.validate();
  if (h.successful_count() < static_cast<std::size_t>(cfg.n_startup)) {
    return sample_uniform(space, rng);
  }
  const HistorySplit split = split_history(h, cfg.gamma);
  if (split.below.empty()) {
    return sample_uniform(space, rng);
  }

  const auto encode_all = [&space](const std::vector<TrialResult> & trials) {
    std::vector<std::vector<double>> encoded;
    encoded.reserve(trials.size());
    for (const TrialResult & t : trials) {
      encoded.push_back(encode(space, t.x));
    }
    return encoded;
  };
  const ParzenEstimator good(encode_all(split.below), space.size());
  const ParzenEstimator bad(encode_all(split.above), space.size());

  double best_score = -std::numeric_limits<double>::infinity();
  ParameterVector best;
  for (int c = 0; c < cfg.n_candidates; ++c) {
    const std::vector<double> draw = good.sample(rng);
    // Snap to the grid for discrete/categorical dimensions before scoring so
    // the score belongs to the point actually returned.
    ParameterVector x = decode(space, draw);
    const std::vector<double> snapped = encode(space, x);
    const double score = good.log_pdf(snapped) - bad.log_pdf(snapped);
    if (score > best_score) {
      best_score = score;
      best = std::move(x);
    }
  }
  return best;
}

History optimize(
  const Objective & objective, const ParameterSpace & space, int n_trials, const TpeConfig & cfg,
  std::mt19937_64 & rng)
{
  cfg.validate();
  History h;
  h.trials.reserve(static_cast<std::size_t>(std::max(n_trials, 0)));
  for (int i = 0; i < n_trials; ++i) {
    TrialResult trial;
    trial.x = suggest(h, space, cfg, rng);
    try {
      trial.y = objective(trial.x);
      trial.failed = !std::isfinite(trial.y);
    } catch (const std::exception & e) {
      log::warn("trial ", i, " failed: ", e.what());
      trial.failed = true;
    } catch (...) {
      log::warn("trial ", i, " failed with a non-standard exception");
      trial.failed = true;
    }
    if (trial.failed) {
      trial.y = std::numeric_limits<double>::quiet_NaN();
    }
    h.trials.push_back(std::move(trial));
  }
  return h;
}

History optimize(
  const Objective & objective, const ParameterSpace & space, int n_trials, const TpeConfig & cfg)
{
  std::mt19937_64 rng(cfg.seed);
  return optimize(objective, space, n_trials, cfg, rng);
}

void save_history(const History & h, const ParameterSpace & space, const std::string & path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  for (const TrialResult & t : h.trials) {
    nlohmann::json j;
    j["x"] = params_to_json(space, t.x);
    if (t.failed) {
      j["y"] = "failed";
    } else {
      j["y"] = t.y;
    }
    out << j.dump() << '\n';
  }
}

History load_history(const ParameterSpace & space, const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open history file '" + path + "'");
  }
  History h;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
      continue;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception & e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    TrialResult t;
    t.x = params_from_json(space, j.at("x"));
    const nlohmann::json & y = j.at("y");
    if (y.is_string()) {
      t.failed = true;
      t.y = std::numeric_limits<double>::quiet_NaN();
    } else {
      t.y = y.get<double>();
    }
    h.trials.push_back(std::move(t));
  }
  return h;
}

}  // namespace adaptune
