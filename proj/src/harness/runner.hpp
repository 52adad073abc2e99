// Copyright 2026 The Sidelink Scheduler Authors.
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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "env.hpp"
#include "harness/experiment_spec.hpp"

namespace sidelink::harness {

// Where an epoch report came from; written in front of every event record.
struct EventContext {
  double licensed_bps = 0.0;
  env::ChannelMode channel_mode = env::ChannelMode::kDynamicPerPacket;
  std::string_view policy;
  std::uint64_t seed = 0;
};

// Raw EpochReport dump, one CSV record per epoch:
// licensed_bps,channel_mode,policy,seed,episode,slot,action,outcome,
// arrivals,overflow,rate_bps,reward,delivered_bits
class EventLog {
 public:
  explicit EventLog(const std::filesystem::path& path);
  void write(const EventContext& ctx, std::uint64_t episode,
             const env::EpochReport& r);
  void flush();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

using PolicyFn = std::function<int(const StateVector&)>;

// Frozen-policy rollout of `epochs` decision epochs in episodes of
// cfg.episode_length; the environment is reset between episodes.
env::BlockingTally evaluate_policy(const env::EnvConfig& cfg,
                                   const PolicyFn& policy, std::uint64_t epochs,
                                   EventLog* events = nullptr,
                                   const EventContext& ctx = {});

struct TrainingLogRow {
  std::uint64_t epoch = 0;
  std::uint64_t episode = 0;
  double epsilon = 0.0;
  std::optional<double> mean_loss;         // absent when no update ran
  std::optional<double> rolling_blocking;  // absent when nothing arrived
};

struct TrainingResult {
  std::vector<TrainingLogRow> log;
  std::uint64_t epochs = 0;
  std::uint64_t episodes = 0;
  std::uint64_t updates = 0;
  double final_epsilon = 0.0;
};

struct SweepRow {
  double licensed_bps = 0.0;
  Policy policy = Policy::kThreshold;
  std::optional<std::uint64_t> seed;  // absent on per-budget mean rows
  std::uint64_t epochs = 0;
  double blocking_prob = 0.0;
  // Per-cause shares of presented packets; they sum to blocking_prob.
  double blocked_overflow = 0.0;
  double blocked_no_bandwidth = 0.0;
  double blocked_lbt = 0.0;
  double mean_throughput_bps = 0.0;
};

struct SummaryRow {
  double licensed_bps = 0.0;
  Policy policy = Policy::kThreshold;
  std::size_t seeds = 0;
  double mean_blocking = 0.0;
  std::optional<double> ci95_half_width;  // needs two or more seeds
  double mean_throughput_bps = 0.0;
  double throughput_floor_bps = 0.0;
  bool below_floor = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SummaryRow> summary;
  double throughput_floor_bps = 0.0;
};

struct ChannelComparisonRow {
  double licensed_bps = 0.0;
  env::ChannelMode channel_mode = env::ChannelMode::kDynamicPerPacket;
  std::size_t seeds = 0;
  std::uint64_t epochs = 0;
  double blocking_prob = 0.0;
  std::optional<double> blocking_ci95;
  double blocked_overflow = 0.0;
  double blocked_no_bandwidth = 0.0;
  double blocked_lbt = 0.0;
  double mean_throughput_bps = 0.0;
  // Same value on both rows of a budget.
  double diff_static_minus_dynamic = 0.0;
};

struct QueueValidationRow {
  double rho = 0.0;
  std::size_t k = 0;
  std::uint64_t arrivals = 0;
  double simulated = 0.0;
  double analytic = 0.0;
  double standard_error = 0.0;
  double z_score = 0.0;
};

// Each run_* function writes its outputs when spec.output_path is set and
// returns the rows it wrote.

// Writes checkpoint_path, its ".meta" sidecar and, if set, the training log
// at output_path.
TrainingResult run_training(const ExperimentSpec& spec,
                            EventLog* events = nullptr);

// Frozen-policy evaluation at env.licensed_budget_bps for every seed.
SweepResult run_evaluate(const ExperimentSpec& spec,
                         EventLog* events = nullptr);

// Same evaluation over every sweep point. Also writes
// "<output_path>.summary.csv" with means, 95% intervals and the throughput
// floor flag.
SweepResult run_sweep(const ExperimentSpec& spec, EventLog* events = nullptr);

std::vector<ChannelComparisonRow> run_channel_mode_comparison(
    const ExperimentSpec& spec, EventLog* events = nullptr);

std::vector<QueueValidationRow> run_queue_validation(const ExperimentSpec& spec);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string training_log_csv(const std::vector<TrainingLogRow>& rows);
std::string channel_comparison_csv(const std::vector<ChannelComparisonRow>& rows);
std::string queue_validation_csv(const std::vector<QueueValidationRow>& rows);

// Student-t 95% half width of the mean; absent for fewer than two samples.
std::optional<double> ci95_half_width(const std::vector<double>& samples);

// Command-line style entry point shared by the CLI and the C API.
struct RunRequest {
  Mode mode = Mode::kEvaluate;
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> dump_events;
};

// Loads the spec, applies overrides, runs, and returns a short human-readable
// report of what was written.
std::string execute(const RunRequest& request);

// Applies the --seed/--out overrides of `request` to `spec`.
void apply_overrides(ExperimentSpec& spec, const RunRequest& request);

}  // namespace sidelink::harness
