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

#include "ddqn_agent.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "format.hpp"

namespace sidelink::ddqn {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) {
    throw ConfigError("replay buffer capacity must be at least 1");
  }
  storage_.reserve(std::min<std::size_t>(capacity_, 1 << 16));
}

void ReplayBuffer::push(const Transition& t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(t);
    return;
  }
  storage_[cursor_] = t;
  cursor_ = (cursor_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= storage_.size()) throw UsageError("replay index out of range");
  // Once wrapped, cursor_ points at the oldest element.
  return storage_[(cursor_ + i) % storage_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch_size,
                                                      Rng& rng) const {
  if (batch_size == 0 || storage_.size() < batch_size) {
    throw UsageError("replay buffer holds " + std::to_string(storage_.size()) +
                     " transitions, cannot sample a batch of " +
                     std::to_string(batch_size));
  }
  std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
  std::vector<std::size_t> idx(batch_size);
  for (std::size_t& i : idx) i = pick(rng);
  return idx;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size,
                                             Rng& rng) const {
  std::vector<Transition> batch;
  batch.reserve(batch_size);
  for (std::size_t i : sample_indices(batch_size, rng)) {
    batch.push_back(storage_[i]);
  }
  return batch;
}

EpsilonSchedule EpsilonSchedule::linear_with_decrement(double initial,
                                                       double minimum,
                                                       double decrement) {
  if (!(decrement > 0.0)) {
    throw ConfigError("epsilon decrement must be positive");
  }
  EpsilonSchedule s;
  s.kind = Kind::kLinear;
  s.initial = initial;
  s.minimum = minimum;
  s.decay_steps = (initial - minimum) / decrement;
  return s;
}

void EpsilonSchedule::validate() const {
  if (!(initial >= 0.0 && initial <= 1.0) ||
      !(minimum >= 0.0 && minimum <= initial)) {
    throw ConfigError("epsilon schedule needs 0 <= minimum <= initial <= 1");
  }
  if (!(decay_steps > 0.0)) {
    throw ConfigError("epsilon decay horizon must be positive");
  }
}

double epsilon_at(const EpsilonSchedule& schedule, std::uint64_t k) {
  const double step = static_cast<double>(k);
  double eps = 0.0;
  if (schedule.kind == EpsilonSchedule::Kind::kExponential) {
    eps = schedule.initial * std::exp(-step / schedule.decay_steps);
  } else {
    eps = schedule.initial -
          (schedule.initial - schedule.minimum) * step / schedule.decay_steps;
  }
  return std::max(schedule.minimum, eps);
}

void Hyperparams::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ConfigError("gamma must lie in (0,1]");
  }
  if (batch_size == 0) throw ConfigError("batch_size must be at least 1");
  if (target_sync_period == 0) {
    throw ConfigError("target_sync_period must be at least 1");
  }
  if (train_start_threshold < batch_size) {
    throw ConfigError("train_start_threshold must be at least batch_size");
  }
  if (replay_capacity < train_start_threshold) {
    throw ConfigError("replay_capacity must hold train_start_threshold "
                      "transitions");
  }
  if (train_every == 0) throw ConfigError("train_every must be at least 1");
  epsilon.validate();
  nn::LearningRateSchedule check(learning_rate);
  (void)check;
  for (int h : hidden_sizes) {
    if (h <= 0) throw ConfigError("hidden layer sizes must be positive");
  }
}

std::vector<int> Hyperparams::layer_sizes() const {
  std::vector<int> sizes;
  sizes.push_back(static_cast<int>(kStateDim));
  sizes.insert(sizes.end(), hidden_sizes.begin(), hidden_sizes.end());
  sizes.push_back(static_cast<int>(kNumActions));
  return sizes;
}

int select_action(const nn::QNetwork& net, const StateVector& s,
                  double epsilon, Rng& rng) {
  // Exactly one uniform draw decides exploration, a second picks the arm.
  if (uniform01(rng) < epsilon) {
    std::uniform_int_distribution<int> pick(0,
                                            static_cast<int>(kNumActions) - 1);
    return pick(rng);
  }
  return greedy_action(net.q_values(s));
}

double train_step(nn::QNetwork& online, const nn::QNetwork& target,
                  nn::AdamOptimizer& opt, const ReplayBuffer& buffer,
                  const Hyperparams& hp, Rng& replay_rng, Rng& dropout_rng) {
  const std::vector<Transition> batch = buffer.sample(hp.batch_size, replay_rng);
  std::vector<double> grad(online.num_parameters(), 0.0);
  nn::ForwardCache cache;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const Transition& t : batch) {
    const double y = ddqn_target(online, target, t, hp.gamma);
    const QValues q = online.forward(t.s, cache, &dropout_rng);
    const double residual = y - q[static_cast<std::size_t>(t.a)];
    loss += residual * residual * inv_batch;
    online.backward(cache, t.a, y, grad, inv_batch);
  }
  opt.step(online, grad);
  return loss;
}

bool maybe_sync(const nn::QNetwork& online, nn::QNetwork& target,
                std::uint64_t step, std::uint64_t period) {
  if (period == 0) throw ConfigError("target sync period must be positive");
  if (step % period != 0) return false;
  nn::copy_parameters(online, target);
  return true;
}

DdqnAgent::DdqnAgent(Hyperparams hp, std::uint64_t seed)
    : hp_((hp.validate(), std::move(hp))),
      seed_(seed),
      init_rng_(make_stream(seed, Stream::kInit)),
      online_(hp_.layer_sizes(), hp_.dropout_rate, init_rng_),
      target_(online_),
      optimizer_(online_.num_parameters(),
                 nn::AdamConfig{0.9, 0.999, 1e-8,
                                nn::LearningRateSchedule(hp_.learning_rate)}),
      replay_(hp_.replay_capacity),
      explore_rng_(make_stream(seed, Stream::kExploration)),
      replay_rng_(make_stream(seed, Stream::kReplay)),
      dropout_rng_(make_stream(seed, Stream::kDropout)) {}

double DdqnAgent::current_epsilon() const {
  return epsilon_at(hp_.epsilon, steps_);
}

int DdqnAgent::act(const StateVector& s) {
  return select_action(online_, s, current_epsilon(), explore_rng_);
}

int DdqnAgent::act_greedy(const StateVector& s) const {
  return greedy_action(online_.q_values(s));
}

double DdqnAgent::observe(const Transition& t) {
  replay_.push(t);
  ++steps_;
  double loss = -1.0;
  if (replay_.size() >= hp_.train_start_threshold &&
      steps_ % hp_.train_every == 0) {
    loss = train_step(online_, target_, optimizer_, replay_, hp_, replay_rng_,
                      dropout_rng_);
  }
  maybe_sync(online_, target_, steps_, hp_.target_sync_period);
  return loss;
}

std::filesystem::path meta_path_for(const std::filesystem::path& checkpoint) {
  std::filesystem::path p = checkpoint;
  p += ".meta";
  return p;
}

CheckpointMeta describe(const DdqnAgent& agent) {
  const Hyperparams& hp = agent.hyperparams();
  CheckpointMeta meta;
  auto& e = meta.entries;
  e["format_version"] = "1";
  e["seed"] = std::to_string(agent.seed());
  e["step"] = std::to_string(agent.steps());
  e["updates"] = std::to_string(agent.updates());
  e["epsilon"] = fmt_double(agent.current_epsilon());
  e["epsilon_kind"] =
      hp.epsilon.kind == EpsilonSchedule::Kind::kLinear ? "linear"
                                                        : "exponential";
  e["epsilon_initial"] = fmt_double(hp.epsilon.initial);
  e["epsilon_minimum"] = fmt_double(hp.epsilon.minimum);
  e["epsilon_decay_steps"] = fmt_double(hp.epsilon.decay_steps);
  std::string sizes;
  for (int s : hp.layer_sizes()) {
    if (!sizes.empty()) sizes += ',';
    sizes += std::to_string(s);
  }
  e["layer_sizes"] = sizes;
  e["gamma"] = fmt_double(hp.gamma);
  return meta;
}

void CheckpointMeta::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint metadata: " + path.string());
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
  if (!out) throw IoError("failed writing checkpoint metadata: " + path.string());
}

CheckpointMeta CheckpointMeta::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read checkpoint metadata: " + path.string());
  CheckpointMeta meta;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw IoError("malformed metadata line '" + line + "' in " +
                    path.string());
    }
    meta.entries[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

}  // namespace sidelink::ddqn
