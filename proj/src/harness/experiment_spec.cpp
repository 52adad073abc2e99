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

#include "harness/experiment_spec.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sidelink::harness {

namespace {

using nlohmann::json;

// Reads fields from one JSON object and remembers which keys were consumed
// so that leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string context)
      : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) fail(context_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) out = as_number(*v, path(key));
  }

  template <typename Int>
  void count(const std::string& key, Int& out) {
    if (const json* v = find(key)) out = static_cast<Int>(as_count(*v, path(key)));
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) out = as_string(*v, path(key));
  }

  template <std::size_t N>
  void numbers(const std::string& key, std::array<double, N>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != N) {
        fail(path(key), "expected an array of " + std::to_string(N) + " numbers");
      }
      for (std::size_t i = 0; i < N; ++i) {
        out[i] = as_number((*v)[i], path(key) + "[" + std::to_string(i) + "]");
      }
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(path(it.key()), "unknown key");
    }
  }

  std::string path(const std::string& key) const {
    return context_.empty() ? key : context_ + "." + key;
  }

  [[noreturn]] static void fail(const std::string& where,
                                const std::string& what) {
    throw ConfigError("spec: " + (where.empty() ? std::string("<root>") : where) +
                      ": " + what);
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where, "expected a finite number");
    return x;
  }

  // Non-negative integer; integral floats such as 1e5 are accepted.
  static std::uint64_t as_count(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) fail(where, "expected a non-negative integer");
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (x >= 0.0 && x < 1.8e19 && std::floor(x) == x) {
        return static_cast<std::uint64_t>(x);
      }
    }
    fail(where, "expected a non-negative integer");
  }

  static std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) ObjectReader::fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(
        ObjectReader::as_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::uint64_t> count_list(const json& v, const std::string& where) {
  if (!v.is_array()) ObjectReader::fail(where, "expected an array of integers");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(
        ObjectReader::as_count(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void read_env(const json& j, const std::string& ctx, env::EnvConfig& cfg) {
  ObjectReader r(j, ctx);
  r.number("licensed_budget_bps", cfg.licensed_budget_bps);
  r.numbers("licensed_split", cfg.licensed_split);
  r.number("unlicensed_bw_hz", cfg.unlicensed_bw_hz);
  if (const json* v = r.find("channel_mode")) {
    cfg.channel_mode = env::channel_mode_from_string(
        ObjectReader::as_string(*v, r.path("channel_mode")));
  }
  r.numbers("snr_targets_db", cfg.snr_targets_db);
  r.number("cc_distance_m", cfg.cc_distance_m);
  r.number("sl_distance_m", cfg.sl_distance_m);
  r.number("gnb_height_m", cfg.gnb_height_m);
  r.number("ue_height_m", cfg.ue_height_m);
  r.number("sl_tx_height_m", cfg.sl_tx_height_m);
  r.number("k_factor", cfg.k_factor);
  r.number("nlos_power_scale", cfg.nlos_power_scale);
  r.boolean("line_of_sight", cfg.line_of_sight);
  r.number("arrival_rate", cfg.arrival_rate);
  r.count("queue_capacity", cfg.queue_capacity);
  r.count("episode_length", cfg.episode_length);
  r.number("slot_seconds", cfg.slot_seconds);
  r.number("packet_bits", cfg.packet_bits);
  r.number("wifi_p_busy_to_idle", cfg.wifi_p_busy_to_idle);
  r.number("wifi_p_idle_to_busy", cfg.wifi_p_idle_to_busy);
  r.count("wifi_window", cfg.wifi_window);
  if (const json* v = r.find("wifi_observation")) {
    const std::string s =
        ObjectReader::as_string(*v, r.path("wifi_observation"));
    if (s == "estimate") {
      cfg.wifi_observation = env::WifiObservation::kEstimate;
    } else if (s == "stationary") {
      cfg.wifi_observation = env::WifiObservation::kStationary;
    } else {
      ObjectReader::fail(r.path("wifi_observation"),
                         "expected \"estimate\" or \"stationary\"");
    }
  }
  r.numbers("dispatch_share", cfg.dispatch_share);
  if (const json* v = r.find("service_model")) {
    const std::string s = ObjectReader::as_string(*v, r.path("service_model"));
    if (s == "physical") {
      cfg.service_model = env::ServiceModel::kPhysical;
    } else if (s == "exponential") {
      cfg.service_model = env::ServiceModel::kExponential;
    } else {
      ObjectReader::fail(r.path("service_model"),
                         "expected \"physical\" or \"exponential\"");
    }
  }
  r.number("exponential_service_slots", cfg.exponential_service_slots);
  r.count("seed", cfg.seed);
  r.finish();
}

void read_epsilon(const json& j, const std::string& ctx,
                  ddqn::EpsilonSchedule& eps) {
  ObjectReader r(j, ctx);
  if (const json* v = r.find("kind")) {
    const std::string s = ObjectReader::as_string(*v, r.path("kind"));
    if (s == "linear") {
      eps.kind = ddqn::EpsilonSchedule::Kind::kLinear;
    } else if (s == "exponential") {
      eps.kind = ddqn::EpsilonSchedule::Kind::kExponential;
    } else {
      ObjectReader::fail(r.path("kind"),
                         "expected \"linear\" or \"exponential\"");
    }
  }
  r.number("initial", eps.initial);
  r.number("minimum", eps.minimum);
  const bool has_decay = r.has("decay_steps");
  const bool has_decrement = r.has("decrement");
  if (has_decay && has_decrement) {
    ObjectReader::fail(ctx, "give either decay_steps or decrement, not both");
  }
  r.number("decay_steps", eps.decay_steps);
  if (const json* v = r.find("decrement")) {
    if (eps.kind != ddqn::EpsilonSchedule::Kind::kLinear) {
      ObjectReader::fail(r.path("decrement"),
                         "only meaningful for the linear schedule");
    }
    const double dec = ObjectReader::as_number(*v, r.path("decrement"));
    eps = ddqn::EpsilonSchedule::linear_with_decrement(eps.initial,
                                                       eps.minimum, dec);
  }
  r.finish();
}

void read_agent(const json& j, const std::string& ctx, ddqn::Hyperparams& hp) {
  ObjectReader r(j, ctx);
  r.number("gamma", hp.gamma);
  r.count("batch_size", hp.batch_size);
  r.count("target_sync_period", hp.target_sync_period);
  if (const json* v = r.find("epsilon")) {
    read_epsilon(*v, r.path("epsilon"), hp.epsilon);
  }
  r.count("train_start_threshold", hp.train_start_threshold);
  r.count("replay_capacity", hp.replay_capacity);
  if (const json* v = r.find("hidden_sizes")) {
    hp.hidden_sizes.clear();
    for (std::uint64_t h : count_list(*v, r.path("hidden_sizes"))) {
      if (h == 0 || h > 1u << 16) {
        ObjectReader::fail(r.path("hidden_sizes"),
                           "layer sizes must lie in [1, 65536]");
      }
      hp.hidden_sizes.push_back(static_cast<int>(h));
    }
  }
  r.number("dropout_rate", hp.dropout_rate);
  if (const json* v = r.find("learning_rate")) {
    const std::string where = r.path("learning_rate");
    hp.learning_rate.clear();
    if (v->is_number()) {
      hp.learning_rate.push_back({0, ObjectReader::as_number(*v, where)});
    } else if (v->is_array()) {
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& m = (*v)[i];
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (!m.is_array() || m.size() != 2) {
          ObjectReader::fail(at, "expected a [step, rate] pair");
        }
        hp.learning_rate.push_back({ObjectReader::as_count(m[0], at + "[0]"),
                                    ObjectReader::as_number(m[1], at + "[1]")});
      }
    } else {
      ObjectReader::fail(where, "expected a rate or a list of [step, rate]");
    }
  }
  r.count("train_every", hp.train_every);
  r.finish();
}

void read_threshold(const json& j, const std::string& ctx,
                    baselines::ThresholdConfig& t) {
  ObjectReader r(j, ctx);
  r.number("wifi_idle_pivot", t.wifi_idle_pivot);
  r.number("licensed_residual_pivot", t.licensed_residual_pivot);
  r.finish();
}

void read_queue_validation(const json& j, const std::string& ctx,
                           QueueValidationSpec& q) {
  ObjectReader r(j, ctx);
  if (const json* v = r.find("rhos")) q.rhos = number_list(*v, r.path("rhos"));
  if (const json* v = r.find("capacities")) {
    q.capacities.clear();
    for (std::uint64_t k : count_list(*v, r.path("capacities"))) {
      q.capacities.push_back(static_cast<std::size_t>(k));
    }
  }
  r.count("arrivals", q.arrivals);
  r.count("batches", q.batches);
  r.count("seed", q.seed);
  r.finish();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("spec: malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kTrain: return "train";
    case Mode::kEvaluate: return "evaluate";
    case Mode::kSweep: return "sweep";
    case Mode::kCompareChannel: return "compare-channel";
    case Mode::kValidateQueue: return "validate-queue";
  }
  return "evaluate";
}

Mode mode_from_string(std::string_view s) {
  if (s == "train") return Mode::kTrain;
  if (s == "evaluate") return Mode::kEvaluate;
  if (s == "sweep") return Mode::kSweep;
  if (s == "compare-channel") return Mode::kCompareChannel;
  if (s == "validate-queue") return Mode::kValidateQueue;
  throw ConfigError("unknown mode '" + std::string(s) + "'");
}

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::kDdqn: return "ddqn";
    case Policy::kThreshold: return "threshold";
    case Policy::kRandom: return "random";
  }
  return "ddqn";
}

Policy policy_from_string(std::string_view s) {
  if (s == "ddqn") return Policy::kDdqn;
  if (s == "threshold") return Policy::kThreshold;
  if (s == "random") return Policy::kRandom;
  throw ConfigError("unknown policy '" + std::string(s) + "'");
}

void ExperimentSpec::validate() const {
  env.validate();
  agent.validate();
  threshold.validate();
  if (policies.empty()) throw ConfigError("spec: policy list is empty");
  std::set<Policy> unique(policies.begin(), policies.end());
  if (unique.size() != policies.size()) {
    throw ConfigError("spec: policy listed twice");
  }
  for (double b : sweep_points) {
    if (!(b > 0.0)) throw ConfigError("spec: sweep_points must be positive");
  }
  if (log_interval == 0) throw ConfigError("spec: log_interval must be >= 1");
  switch (mode) {
    case Mode::kTrain:
      if (unique.count(Policy::kDdqn) == 0 || policies.size() != 1) {
        throw ConfigError("spec: train mode needs policy \"ddqn\"");
      }
      if (checkpoint_path.empty()) {
        throw ConfigError("spec: train mode needs checkpoint_path");
      }
      break;
    case Mode::kSweep:
      if (sweep_points.empty()) {
        throw ConfigError("spec: sweep mode needs non-empty sweep_points");
      }
      [[fallthrough]];
    case Mode::kEvaluate:
      if (seeds.empty()) throw ConfigError("spec: seeds must be non-empty");
      if (epochs_per_point == 0) {
        throw ConfigError("spec: epochs_per_point must be >= 1");
      }
      if (unique.count(Policy::kDdqn) != 0 && checkpoint_path.empty()) {
        throw ConfigError("spec: policy ddqn needs checkpoint_path");
      }
      break;
    case Mode::kCompareChannel:
      if (sweep_points.empty()) {
        throw ConfigError("spec: compare-channel needs non-empty sweep_points");
      }
      if (seeds.empty()) throw ConfigError("spec: seeds must be non-empty");
      if (epochs_per_point == 0) {
        throw ConfigError("spec: epochs_per_point must be >= 1");
      }
      if (static_checkpoint.empty() || dynamic_checkpoint.empty()) {
        throw ConfigError(
            "spec: compare-channel needs channel_checkpoints for both modes");
      }
      break;
    case Mode::kValidateQueue:
      if (queue_validation.rhos.empty() ||
          queue_validation.capacities.empty()) {
        throw ConfigError("spec: queue_validation needs rhos and capacities");
      }
      for (double rho : queue_validation.rhos) {
        if (!(rho > 0.0)) throw ConfigError("spec: rhos must be positive");
      }
      if (queue_validation.batches < 2 ||
          queue_validation.arrivals < queue_validation.batches) {
        throw ConfigError(
            "spec: queue_validation needs >= 2 batches and one arrival each");
      }
      break;
  }
}

ExperimentSpec parse_spec(std::string_view json_text) {
  const json root = parse_json(json_text);
  ExperimentSpec spec;
  ObjectReader r(root, "");

  if (const json* v = r.find("mode")) {
    spec.mode = mode_from_string(ObjectReader::as_string(*v, "mode"));
    spec.mode_declared = true;
  }
  if (const json* v = r.find("policy")) {
    spec.policies.clear();
    if (v->is_string()) {
      spec.policies.push_back(policy_from_string(v->get<std::string>()));
    } else if (v->is_array()) {
      for (std::size_t i = 0; i < v->size(); ++i) {
        spec.policies.push_back(policy_from_string(ObjectReader::as_string(
            (*v)[i], "policy[" + std::to_string(i) + "]")));
      }
    } else {
      ObjectReader::fail("policy", "expected a name or a list of names");
    }
  }
  if (const json* v = r.find("env")) read_env(*v, "env", spec.env);
  if (const json* v = r.find("agent")) read_agent(*v, "agent", spec.agent);
  if (const json* v = r.find("threshold")) {
    read_threshold(*v, "threshold", spec.threshold);
  }
  if (const json* v = r.find("sweep_points")) {
    spec.sweep_points = number_list(*v, "sweep_points");
  }
  if (const json* v = r.find("seeds")) spec.seeds = count_list(*v, "seeds");
  r.count("epochs_per_point", spec.epochs_per_point);
  if (const json* v = r.find("output_path")) {
    spec.output_path =
        std::filesystem::path(ObjectReader::as_string(*v, "output_path"));
  }
  if (const json* v = r.find("checkpoint_path")) {
    spec.checkpoint_path =
        std::filesystem::path(ObjectReader::as_string(*v, "checkpoint_path"));
  }
  r.count("training_epochs", spec.training_epochs);
  r.count("training_seed", spec.training_seed);
  r.count("log_interval", spec.log_interval);
  if (const json* v = r.find("bandit_rewards")) {
    std::vector<double> rewards = number_list(*v, "bandit_rewards");
    if (rewards.size() != kNumActions) {
      ObjectReader::fail("bandit_rewards", "expected one reward per action");
    }
    QValues q{};
    std::copy(rewards.begin(), rewards.end(), q.begin());
    spec.bandit_rewards = q;
  }
  if (const json* v = r.find("channel_checkpoints")) {
    ObjectReader c(*v, "channel_checkpoints");
    std::string s;
    c.string("static_per_episode", s);
    if (!s.empty()) spec.static_checkpoint = std::filesystem::path(s);
    s.clear();
    c.string("dynamic_per_packet", s);
    if (!s.empty()) spec.dynamic_checkpoint = std::filesystem::path(s);
    c.finish();
  }
  if (const json* v = r.find("queue_validation")) {
    read_queue_validation(*v, "queue_validation", spec.queue_validation);
  }
  if (const json* v = r.find("epsilon_r_bps")) {
    spec.epsilon_r_bps = ObjectReader::as_number(*v, "epsilon_r_bps");
    if (*spec.epsilon_r_bps < 0.0) {
      ObjectReader::fail("epsilon_r_bps", "must be non-negative");
    }
  }
  r.finish();
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spec: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading spec: " + path.string());
  return parse_spec(buf.str());
}

env::EnvConfig parse_env_config(std::string_view json_text) {
  env::EnvConfig cfg;
  read_env(parse_json(json_text), "env", cfg);
  cfg.validate();
  return cfg;
}

}  // namespace sidelink::harness
