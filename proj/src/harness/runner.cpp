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

#include "harness/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "baseline_policies.hpp"
#include "ddqn_agent.hpp"
#include "format.hpp"
#include "nn_core.hpp"
#include "traffic_queue.hpp"

namespace sidelink::harness {

namespace {

std::string opt_double(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

void ensure_parent(const std::filesystem::path& path) {
  const std::filesystem::path parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) {
    throw IoError("cannot create directory " + parent.string() + ": " +
                  ec.message());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing: " + path.string());
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double share(std::uint64_t part, const env::BlockingTally& t) {
  const std::uint64_t presented = t.presented();
  return presented == 0 ? 0.0
                        : static_cast<double>(part) /
                              static_cast<double>(presented);
}

// Seeds of the training environments, one per budget, kept apart from the
// small integers used as evaluation seeds.
std::uint64_t training_env_seed(std::uint64_t training_seed, std::size_t i) {
  Rng rng = make_stream(training_seed, Stream::kArrivals,
                        1000u + static_cast<std::uint32_t>(i));
  return rng();
}

std::vector<double> training_budgets(const ExperimentSpec& spec) {
  if (spec.sweep_points.empty()) return {spec.env.licensed_budget_bps};
  return spec.sweep_points;
}

std::string budgets_text(const std::vector<double>& budgets) {
  std::string s;
  for (double b : budgets) {
    if (!s.empty()) s += ',';
    s += fmt_double(b);
  }
  return s;
}

// Builds the greedy/threshold/random decision rule for one evaluation run.
class PolicyFactory {
 public:
  PolicyFactory(const ExperimentSpec& spec, const std::vector<Policy>& policies)
      : threshold_(spec.threshold) {
    if (std::find(policies.begin(), policies.end(), Policy::kDdqn) !=
        policies.end()) {
      net_ = std::make_shared<nn::QNetwork>(
          nn::load_checkpoint(spec.checkpoint_path));
    }
  }

  PolicyFn make(Policy p, std::uint64_t seed) const {
    switch (p) {
      case Policy::kDdqn: {
        std::shared_ptr<const nn::QNetwork> net = net_;
        return [net](const StateVector& s) {
          return ddqn::greedy_action(net->q_values(s));
        };
      }
      case Policy::kThreshold: {
        baselines::ThresholdConfig cfg = threshold_;
        return [cfg](const StateVector& s) {
          return env::index_of(baselines::threshold_policy(s, cfg));
        };
      }
      case Policy::kRandom: {
        auto rng = std::make_shared<Rng>(make_stream(seed, Stream::kPolicy));
        return [rng](const StateVector&) {
          return env::index_of(baselines::random_policy(*rng));
        };
      }
    }
    throw UsageError("unhandled policy");
  }

 private:
  baselines::ThresholdConfig threshold_;
  std::shared_ptr<const nn::QNetwork> net_;
};

SweepRow row_from_tally(double budget, Policy policy, std::uint64_t seed,
                        std::uint64_t epochs, const env::BlockingTally& t,
                        double slot_seconds) {
  SweepRow row;
  row.licensed_bps = budget;
  row.policy = policy;
  row.seed = seed;
  row.epochs = epochs;
  row.blocking_prob = env::blocking_probability(t).value_or(0.0);
  row.blocked_overflow = share(t.blocked_overflow, t);
  row.blocked_no_bandwidth = share(t.blocked_no_bandwidth, t);
  row.blocked_lbt = share(t.blocked_lbt, t);
  row.mean_throughput_bps = env::mean_throughput(t, slot_seconds);
  return row;
}

SweepResult evaluate_grid(const ExperimentSpec& spec,
                          const std::vector<double>& budgets,
                          EventLog* events) {
  // Deterministic row order: budget as given, then policy, then seed.
  std::vector<Policy> policies = spec.policies;
  std::sort(policies.begin(), policies.end(), [](Policy a, Policy b) {
    return to_string(a) < to_string(b);
  });
  const PolicyFactory factory(spec, policies);

  SweepResult result;
  std::map<std::pair<std::size_t, Policy>, std::vector<SweepRow>> per_seed;
  for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
    env::EnvConfig cfg = spec.env;
    cfg.licensed_budget_bps = budgets[bi];
    for (Policy p : policies) {
      std::vector<SweepRow>& rows = per_seed[{bi, p}];
      for (std::uint64_t seed : spec.seeds) {
        cfg.seed = seed;
        const EventContext ctx{budgets[bi], cfg.channel_mode, to_string(p),
                               seed};
        const env::BlockingTally tally = evaluate_policy(
            cfg, factory.make(p, seed), spec.epochs_per_point, events, ctx);
        rows.push_back(row_from_tally(budgets[bi], p, seed,
                                      spec.epochs_per_point, tally,
                                      cfg.slot_seconds));
      }
      for (const SweepRow& r : rows) result.rows.push_back(r);
      SweepRow mean;
      mean.licensed_bps = budgets[bi];
      mean.policy = p;
      mean.epochs = spec.epochs_per_point;
      std::vector<double> col;
      auto avg = [&](double SweepRow::*field) {
        col.clear();
        for (const SweepRow& r : rows) col.push_back(r.*field);
        return mean_of(col);
      };
      mean.blocking_prob = avg(&SweepRow::blocking_prob);
      mean.blocked_overflow = avg(&SweepRow::blocked_overflow);
      mean.blocked_no_bandwidth = avg(&SweepRow::blocked_no_bandwidth);
      mean.blocked_lbt = avg(&SweepRow::blocked_lbt);
      mean.mean_throughput_bps = avg(&SweepRow::mean_throughput_bps);
      result.rows.push_back(mean);
    }
  }

  // Throughput floor for the constraint monitor.
  if (spec.epsilon_r_bps) {
    result.throughput_floor_bps = *spec.epsilon_r_bps;
  } else {
    const auto smallest = static_cast<std::size_t>(
        std::min_element(budgets.begin(), budgets.end()) - budgets.begin());
    std::vector<double> random_tp;
    auto it = per_seed.find({smallest, Policy::kRandom});
    if (it != per_seed.end()) {
      for (const SweepRow& r : it->second) {
        random_tp.push_back(r.mean_throughput_bps);
      }
    } else {
      env::EnvConfig cfg = spec.env;
      cfg.licensed_budget_bps = budgets[smallest];
      for (std::uint64_t seed : spec.seeds) {
        cfg.seed = seed;
        const env::BlockingTally t =
            evaluate_policy(cfg, factory.make(Policy::kRandom, seed),
                            spec.epochs_per_point);
        random_tp.push_back(env::mean_throughput(t, cfg.slot_seconds));
      }
    }
    result.throughput_floor_bps = 0.5 * mean_of(random_tp);
  }

  for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
    for (Policy p : policies) {
      const std::vector<SweepRow>& rows = per_seed.at({bi, p});
      std::vector<double> blocking;
      std::vector<double> tp;
      for (const SweepRow& r : rows) {
        blocking.push_back(r.blocking_prob);
        tp.push_back(r.mean_throughput_bps);
      }
      SummaryRow s;
      s.licensed_bps = budgets[bi];
      s.policy = p;
      s.seeds = rows.size();
      s.mean_blocking = mean_of(blocking);
      s.ci95_half_width = ci95_half_width(blocking);
      s.mean_throughput_bps = mean_of(tp);
      s.throughput_floor_bps = result.throughput_floor_bps;
      s.below_floor = s.mean_throughput_bps < result.throughput_floor_bps;
      result.summary.push_back(s);
    }
  }
  return result;
}

void write_sweep_outputs(const ExperimentSpec& spec, const SweepResult& r) {
  if (spec.output_path.empty()) return;
  write_text(spec.output_path, sweep_csv(r.rows));
  std::filesystem::path summary = spec.output_path;
  summary += ".summary.csv";
  write_text(summary, summary_csv(r.summary));
}

const char* kSweepHeader =
    "licensed_bps,policy,seed,epochs,blocking_prob,blocked_overflow,"
    "blocked_no_bandwidth,blocked_lbt,mean_throughput_bps\n";

}  // namespace

EventLog::EventLog(const std::filesystem::path& path) : path_(path) {
  ensure_parent(path_);
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open event log: " + path_.string());
  out_ << "licensed_bps,channel_mode,policy,seed,episode,slot,action,outcome,"
          "arrivals,overflow,rate_bps,reward,delivered_bits\n";
}

void EventLog::write(const EventContext& ctx, std::uint64_t episode,
                     const env::EpochReport& r) {
  out_ << fmt_double(ctx.licensed_bps) << ',' << env::to_string(ctx.channel_mode)
       << ',' << ctx.policy << ',' << ctx.seed << ',' << episode << ','
       << r.slot << ',' << env::action_name(r.action) << ','
       << env::to_string(r.outcome) << ',' << r.arrivals << ',' << r.overflow
       << ',' << fmt_double(r.rate_bps) << ',' << fmt_double(r.reward) << ','
       << fmt_double(r.delivered_bits) << '\n';
  if (!out_) throw IoError("failed writing event log: " + path_.string());
}

void EventLog::flush() {
  out_.flush();
  if (!out_) throw IoError("failed writing event log: " + path_.string());
}

env::BlockingTally evaluate_policy(const env::EnvConfig& cfg,
                                   const PolicyFn& policy, std::uint64_t epochs,
                                   EventLog* events, const EventContext& ctx) {
  env::SidelinkEnv environment(cfg);
  env::BlockingTally tally;
  std::uint64_t done = 0;
  std::uint64_t episode = 0;
  while (done < epochs) {
    StateVector s = environment.reset();
    while (!environment.episode_done() && done < epochs) {
      const env::StepResult r = environment.step(policy(s));
      tally.add(r.report);
      if (events != nullptr) events->write(ctx, episode, r.report);
      s = r.next_state;
      ++done;
    }
    ++episode;
  }
  return tally;
}

std::optional<double> ci95_half_width(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) return std::nullopt;
  const double m = mean_of(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double t = boost::math::quantile(dist, 0.975);
  return t * sd / std::sqrt(static_cast<double>(n));
}

TrainingResult run_training(const ExperimentSpec& spec, EventLog* events) {
  ExperimentSpec checked = spec;
  checked.mode = Mode::kTrain;
  checked.validate();

  ddqn::DdqnAgent agent(spec.agent, spec.training_seed);
  const std::vector<double> budgets = training_budgets(spec);

  std::vector<std::unique_ptr<env::Environment>> envs;
  if (spec.bandit_rewards) {
    envs.push_back(std::make_unique<env::BanditEnv>(*spec.bandit_rewards));
  } else {
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      env::EnvConfig cfg = spec.env;
      cfg.licensed_budget_bps = budgets[i];
      cfg.seed = training_env_seed(spec.training_seed, i);
      envs.push_back(std::make_unique<env::SidelinkEnv>(cfg));
    }
  }

  TrainingResult result;
  env::BlockingTally interval_tally;
  double interval_loss = 0.0;
  std::uint64_t interval_updates = 0;
  std::uint64_t epoch = 0;
  auto log_row = [&]() {
    TrainingLogRow row;
    row.epoch = epoch;
    row.episode = result.episodes;
    row.epsilon = agent.current_epsilon();
    if (interval_updates > 0) {
      row.mean_loss = interval_loss / static_cast<double>(interval_updates);
    }
    row.rolling_blocking = env::blocking_probability(interval_tally);
    result.log.push_back(row);
    interval_tally = env::BlockingTally{};
    interval_loss = 0.0;
    interval_updates = 0;
  };

  while (epoch < spec.training_epochs) {
    const std::size_t which = result.episodes % envs.size();
    env::Environment& environment = *envs[which];
    const EventContext ctx{spec.bandit_rewards ? 0.0 : budgets[which],
                           spec.env.channel_mode, "ddqn", spec.training_seed};
    StateVector s = environment.reset();
    while (!environment.episode_done() && epoch < spec.training_epochs) {
      const int a = agent.act(s);
      const env::StepResult r = environment.step(a);
      const double loss =
          agent.observe({s, a, r.reward, r.next_state, r.terminal});
      if (loss >= 0.0) {
        interval_loss += loss;
        ++interval_updates;
      }
      interval_tally.add(r.report);
      if (events != nullptr) events->write(ctx, result.episodes, r.report);
      s = r.next_state;
      ++epoch;
      if (epoch % spec.log_interval == 0) {
        // The row reports the episode in progress.
        log_row();
      }
    }
    ++result.episodes;
  }
  if (epoch % spec.log_interval != 0) log_row();

  result.epochs = epoch;
  result.updates = agent.updates();
  result.final_epsilon = agent.current_epsilon();

  ensure_parent(spec.checkpoint_path);
  nn::save_checkpoint(agent.online(), spec.checkpoint_path);
  ddqn::CheckpointMeta meta = ddqn::describe(agent);
  meta.entries["episodes"] = std::to_string(result.episodes);
  if (spec.bandit_rewards) {
    meta.entries["environment"] = "bandit";
  } else {
    meta.entries["environment"] = "sidelink";
    meta.entries["channel_mode"] = std::string(env::to_string(spec.env.channel_mode));
    meta.entries["training_budgets_bps"] = budgets_text(budgets);
  }
  meta.save(ddqn::meta_path_for(spec.checkpoint_path));
  if (!spec.output_path.empty()) {
    write_text(spec.output_path, training_log_csv(result.log));
  }
  return result;
}

SweepResult run_evaluate(const ExperimentSpec& spec, EventLog* events) {
  ExperimentSpec checked = spec;
  checked.mode = Mode::kEvaluate;
  checked.validate();
  SweepResult r = evaluate_grid(spec, {spec.env.licensed_budget_bps}, events);
  write_sweep_outputs(spec, r);
  return r;
}

SweepResult run_sweep(const ExperimentSpec& spec, EventLog* events) {
  ExperimentSpec checked = spec;
  checked.mode = Mode::kSweep;
  checked.validate();
  SweepResult r = evaluate_grid(spec, spec.sweep_points, events);
  write_sweep_outputs(spec, r);
  return r;
}

std::vector<ChannelComparisonRow> run_channel_mode_comparison(
    const ExperimentSpec& spec, EventLog* events) {
  ExperimentSpec checked = spec;
  checked.mode = Mode::kCompareChannel;
  checked.validate();

  struct Arm {
    env::ChannelMode mode;
    std::shared_ptr<const nn::QNetwork> net;
  };
  const std::array<Arm, 2> arms = {
      Arm{env::ChannelMode::kStaticPerEpisode,
          std::make_shared<nn::QNetwork>(
              nn::load_checkpoint(spec.static_checkpoint))},
      Arm{env::ChannelMode::kDynamicPerPacket,
          std::make_shared<nn::QNetwork>(
              nn::load_checkpoint(spec.dynamic_checkpoint))}};

  std::vector<ChannelComparisonRow> rows;
  for (double budget : spec.sweep_points) {
    std::array<ChannelComparisonRow, 2> pair;
    for (std::size_t m = 0; m < arms.size(); ++m) {
      env::EnvConfig cfg = spec.env;
      cfg.licensed_budget_bps = budget;
      cfg.channel_mode = arms[m].mode;
      std::vector<double> blocking, overflow, nb, lbt, tp;
      for (std::uint64_t seed : spec.seeds) {
        cfg.seed = seed;
        const std::shared_ptr<const nn::QNetwork> net = arms[m].net;
        const EventContext ctx{budget, cfg.channel_mode, "ddqn", seed};
        const env::BlockingTally t = evaluate_policy(
            cfg,
            [net](const StateVector& s) {
              return ddqn::greedy_action(net->q_values(s));
            },
            spec.epochs_per_point, events, ctx);
        blocking.push_back(env::blocking_probability(t).value_or(0.0));
        overflow.push_back(share(t.blocked_overflow, t));
        nb.push_back(share(t.blocked_no_bandwidth, t));
        lbt.push_back(share(t.blocked_lbt, t));
        tp.push_back(env::mean_throughput(t, cfg.slot_seconds));
      }
      ChannelComparisonRow& row = pair[m];
      row.licensed_bps = budget;
      row.channel_mode = arms[m].mode;
      row.seeds = spec.seeds.size();
      row.epochs = spec.epochs_per_point;
      row.blocking_prob = mean_of(blocking);
      row.blocking_ci95 = ci95_half_width(blocking);
      row.blocked_overflow = mean_of(overflow);
      row.blocked_no_bandwidth = mean_of(nb);
      row.blocked_lbt = mean_of(lbt);
      row.mean_throughput_bps = mean_of(tp);
    }
    const double diff = pair[0].blocking_prob - pair[1].blocking_prob;
    for (ChannelComparisonRow& row : pair) {
      row.diff_static_minus_dynamic = diff;
      rows.push_back(row);
    }
  }
  if (!spec.output_path.empty()) {
    write_text(spec.output_path, channel_comparison_csv(rows));
  }
  return rows;
}

std::vector<QueueValidationRow> run_queue_validation(
    const ExperimentSpec& spec) {
  ExperimentSpec checked = spec;
  checked.mode = Mode::kValidateQueue;
  checked.validate();
  const QueueValidationSpec& q = spec.queue_validation;
  std::vector<QueueValidationRow> rows;
  std::uint32_t point = 0;
  for (double rho : q.rhos) {
    for (std::size_t k : q.capacities) {
      Rng rng = make_stream(q.seed, Stream::kArrivals, point++);
      const traffic::Mm1kSimulation sim =
          traffic::simulate_mm1k(rho, k, q.arrivals, rng, q.batches);
      QueueValidationRow row;
      row.rho = rho;
      row.k = k;
      row.arrivals = sim.arrivals;
      row.simulated = sim.blocking();
      row.analytic = traffic::mm1k_blocking(rho, k);
      // Batch means collapse to zero spread when blocking is so rare that no
      // batch sees an event. The binomial error under the analytic value is
      // the floor: it is what an unbiased simulation would show with
      // independent arrivals, and correlation only widens it.
      const double null_se = std::sqrt(row.analytic * (1.0 - row.analytic) /
                                       static_cast<double>(sim.arrivals));
      row.standard_error = std::max(sim.standard_error(), null_se);
      const double gap = row.simulated - row.analytic;
      if (row.standard_error > 0.0) {
        row.z_score = gap / row.standard_error;
      } else {
        row.z_score = gap == 0.0 ? 0.0
                                 : std::copysign(
                                       std::numeric_limits<double>::infinity(),
                                       gap);
      }
      rows.push_back(row);
    }
  }
  if (!spec.output_path.empty()) {
    write_text(spec.output_path, queue_validation_csv(rows));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepHeader;
  for (const SweepRow& r : rows) {
    out << fmt_double(r.licensed_bps) << ',' << to_string(r.policy) << ','
        << (r.seed ? std::to_string(*r.seed) : std::string("mean")) << ','
        << r.epochs << ',' << fmt_double(r.blocking_prob) << ','
        << fmt_double(r.blocked_overflow) << ','
        << fmt_double(r.blocked_no_bandwidth) << ','
        << fmt_double(r.blocked_lbt) << ','
        << fmt_double(r.mean_throughput_bps) << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "licensed_bps,policy,seeds,mean_blocking,ci95_low,ci95_high,"
         "mean_throughput_bps,throughput_floor_bps,below_floor\n";
  for (const SummaryRow& r : rows) {
    std::string low, high;
    if (r.ci95_half_width) {
      low = fmt_double(r.mean_blocking - *r.ci95_half_width);
      high = fmt_double(r.mean_blocking + *r.ci95_half_width);
    }
    out << fmt_double(r.licensed_bps) << ',' << to_string(r.policy) << ','
        << r.seeds << ',' << fmt_double(r.mean_blocking) << ',' << low << ','
        << high << ',' << fmt_double(r.mean_throughput_bps) << ','
        << fmt_double(r.throughput_floor_bps) << ',' << (r.below_floor ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string training_log_csv(const std::vector<TrainingLogRow>& rows) {
  std::ostringstream out;
  out << "epoch,episode,epsilon,mean_loss,rolling_blocking\n";
  for (const TrainingLogRow& r : rows) {
    out << r.epoch << ',' << r.episode << ',' << fmt_double(r.epsilon) << ','
        << opt_double(r.mean_loss) << ',' << opt_double(r.rolling_blocking)
        << '\n';
  }
  return out.str();
}

std::string channel_comparison_csv(
    const std::vector<ChannelComparisonRow>& rows) {
  std::ostringstream out;
  out << "licensed_bps,channel_mode,seeds,epochs,blocking_prob,blocking_ci95,"
         "blocked_overflow,blocked_no_bandwidth,blocked_lbt,"
         "mean_throughput_bps,blocking_diff_static_minus_dynamic\n";
  for (const ChannelComparisonRow& r : rows) {
    out << fmt_double(r.licensed_bps) << ',' << env::to_string(r.channel_mode)
        << ',' << r.seeds << ',' << r.epochs << ','
        << fmt_double(r.blocking_prob) << ',' << opt_double(r.blocking_ci95)
        << ',' << fmt_double(r.blocked_overflow) << ','
        << fmt_double(r.blocked_no_bandwidth) << ','
        << fmt_double(r.blocked_lbt) << ','
        << fmt_double(r.mean_throughput_bps) << ','
        << fmt_double(r.diff_static_minus_dynamic) << '\n';
  }
  return out.str();
}

std::string queue_validation_csv(const std::vector<QueueValidationRow>& rows) {
  std::ostringstream out;
  out << "rho,k,arrivals,simulated,analytic,standard_error,z_score\n";
  for (const QueueValidationRow& r : rows) {
    out << fmt_double(r.rho) << ',' << r.k << ',' << r.arrivals << ','
        << fmt_double(r.simulated) << ',' << fmt_double(r.analytic) << ','
        << fmt_double(r.standard_error) << ',' << fmt_double(r.z_score)
        << '\n';
  }
  return out.str();
}

void apply_overrides(ExperimentSpec& spec, const RunRequest& request) {
  if (spec.mode_declared && spec.mode != request.mode) {
    throw ConfigError("spec declares mode \"" +
                      std::string(to_string(spec.mode)) + "\" but was run as \"" +
                      std::string(to_string(request.mode)) + "\"");
  }
  spec.mode = request.mode;
  if (request.seed) {
    switch (request.mode) {
      case Mode::kTrain: spec.training_seed = *request.seed; break;
      case Mode::kValidateQueue: spec.queue_validation.seed = *request.seed; break;
      default: spec.seeds = {*request.seed}; break;
    }
  }
  if (request.out) spec.output_path = *request.out;
}

std::string execute(const RunRequest& request) {
  ExperimentSpec spec = load_spec(request.config_path);
  apply_overrides(spec, request);
  spec.validate();

  std::unique_ptr<EventLog> events;
  if (request.dump_events) {
    if (spec.mode == Mode::kValidateQueue) {
      throw ConfigError("--dump-events has no epoch reports in validate-queue");
    }
    events = std::make_unique<EventLog>(*request.dump_events);
  }

  std::ostringstream report;
  switch (spec.mode) {
    case Mode::kTrain: {
      const TrainingResult r = run_training(spec, events.get());
      report << "trained " << r.epochs << " epochs over " << r.episodes
             << " episodes, " << r.updates << " updates, final epsilon "
             << fmt_double(r.final_epsilon) << "\n";
      report << "checkpoint: " << spec.checkpoint_path.string() << "\n";
      if (!spec.output_path.empty()) {
        report << "training log: " << spec.output_path.string() << "\n";
      }
      break;
    }
    case Mode::kEvaluate:
    case Mode::kSweep: {
      const SweepResult r = spec.mode == Mode::kSweep
                                ? run_sweep(spec, events.get())
                                : run_evaluate(spec, events.get());
      for (const SummaryRow& s : r.summary) {
        report << fmt_double(s.licensed_bps) << " bps " << to_string(s.policy)
               << ": blocking " << fmt_double(s.mean_blocking);
        if (s.ci95_half_width) {
          report << " +- " << fmt_double(*s.ci95_half_width);
        }
        report << ", throughput " << fmt_double(s.mean_throughput_bps)
               << " bps" << (s.below_floor ? " (below floor)" : "") << "\n";
      }
      if (!spec.output_path.empty()) {
        report << "wrote " << spec.output_path.string() << "\n";
      }
      break;
    }
    case Mode::kCompareChannel: {
      const std::vector<ChannelComparisonRow> rows =
          run_channel_mode_comparison(spec, events.get());
      for (const ChannelComparisonRow& r : rows) {
        report << fmt_double(r.licensed_bps) << " bps "
               << env::to_string(r.channel_mode) << ": blocking "
               << fmt_double(r.blocking_prob) << "\n";
      }
      if (!spec.output_path.empty()) {
        report << "wrote " << spec.output_path.string() << "\n";
      }
      break;
    }
    case Mode::kValidateQueue: {
      const std::vector<QueueValidationRow> rows = run_queue_validation(spec);
      for (const QueueValidationRow& r : rows) {
        report << "rho " << fmt_double(r.rho) << " K " << r.k << ": simulated "
               << fmt_double(r.simulated) << " analytic "
               << fmt_double(r.analytic) << " z " << fmt_double(r.z_score)
               << "\n";
      }
      if (!spec.output_path.empty()) {
        report << "wrote " << spec.output_path.string() << "\n";
      }
      break;
    }
  }
  if (events) events->flush();
  return report.str();
}

}  // namespace sidelink::harness
