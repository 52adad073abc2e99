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

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"
#include "nn_core.hpp"

namespace sidelink::ddqn {

struct Transition {
  StateVector s{};
  int a = 0;
  double r = 0.0;
  StateVector s_next{};
  bool terminal = false;
};

// Fixed-capacity ring; the oldest transition is overwritten once full.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(const Transition& t);

  // Uniform with replacement. Throws UsageError if fewer than batch_size
  // transitions are stored.
  std::vector<Transition> sample(std::size_t batch_size, Rng& rng) const;
  std::vector<std::size_t> sample_indices(std::size_t batch_size,
                                          Rng& rng) const;

  // i-th oldest stored transition.
  const Transition& at(std::size_t i) const;

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::vector<Transition> storage_;
  std::size_t cursor_ = 0;
};

struct EpsilonSchedule {
  enum class Kind { kLinear, kExponential };
  Kind kind = Kind::kLinear;
  double initial = 1.0;
  double minimum = 0.05;
  // Steps to reach the floor (linear) or the e-folding constant
  // (exponential).
  double decay_steps = 1.0e5;

  // Linear schedule expressed as a per-step decrement of epsilon.
  static EpsilonSchedule linear_with_decrement(double initial, double minimum,
                                               double decrement);

  void validate() const;
};

double epsilon_at(const EpsilonSchedule& schedule, std::uint64_t k);

struct Hyperparams {
  double gamma = 0.95;
  std::size_t batch_size = 64;
  std::uint64_t target_sync_period = 1000;
  EpsilonSchedule epsilon;
  std::size_t train_start_threshold = 640;
  std::size_t replay_capacity = 1000000;
  std::vector<int> hidden_sizes = {128, 64};
  double dropout_rate = 0.3;
  std::vector<std::pair<std::uint64_t, double>> learning_rate = {{0, 1e-3}};
  // Gradient updates per environment epoch (1 matches the reference loop).
  std::uint64_t train_every = 1;

  void validate() const;
  std::vector<int> layer_sizes() const;
};

template <typename Q>
concept QFunction = requires(const Q& q, const StateVector& s) {
  { q.q_values(s) } -> std::convertible_to<QValues>;
};

// Lowest index among the maxima.
inline int greedy_action(const QValues& q) {
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

// Epsilon-greedy over the online network's inference-mode Q-values.
int select_action(const nn::QNetwork& net, const StateVector& s,
                  double epsilon, Rng& rng);

// Double-Q target: the online network picks the bootstrap action, the
// target network scores it. Terminal transitions do not bootstrap.
template <QFunction Online, QFunction Target>
double ddqn_target(const Online& online, const Target& target,
                   const Transition& t, double gamma) {
  if (t.terminal || gamma == 0.0) return t.r;
  const int next_action = greedy_action(online.q_values(t.s_next));
  return t.r + gamma * target.q_values(t.s_next)[static_cast<std::size_t>(
                           next_action)];
}

// One minibatch update on the mean squared Bellman error; returns the batch
// loss measured before the update.
double train_step(nn::QNetwork& online, const nn::QNetwork& target,
                  nn::AdamOptimizer& opt, const ReplayBuffer& buffer,
                  const Hyperparams& hp, Rng& replay_rng, Rng& dropout_rng);

// Copies online into target when step is a multiple of period.
bool maybe_sync(const nn::QNetwork& online, nn::QNetwork& target,
                std::uint64_t step, std::uint64_t period);

// Online/target pair, optimizer, replay memory and the streams that drive
// them.
class DdqnAgent {
 public:
  DdqnAgent(Hyperparams hp, std::uint64_t seed);

  // Epsilon-greedy action at the current schedule position.
  int act(const StateVector& s);
  int act_greedy(const StateVector& s) const;

  // Stores the transition, trains once the buffer is warm, syncs the target
  // and advances the step counter. Returns the loss, or a negative value
  // when no update happened.
  double observe(const Transition& t);

  double current_epsilon() const;
  std::uint64_t steps() const { return steps_; }
  std::uint64_t updates() const { return optimizer_.step_count(); }
  const Hyperparams& hyperparams() const { return hp_; }
  const nn::QNetwork& online() const { return online_; }
  const nn::QNetwork& target() const { return target_; }
  nn::QNetwork& mutable_online() { return online_; }
  const ReplayBuffer& replay() const { return replay_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Hyperparams hp_;
  std::uint64_t seed_;
  Rng init_rng_;
  nn::QNetwork online_;
  nn::QNetwork target_;
  nn::AdamOptimizer optimizer_;
  ReplayBuffer replay_;
  Rng explore_rng_;
  Rng replay_rng_;
  Rng dropout_rng_;
  std::uint64_t steps_ = 0;
};

// Sidecar metadata written next to a checkpoint: one "key=value" per line,
// keys sorted.
struct CheckpointMeta {
  std::map<std::string, std::string> entries;

  void save(const std::filesystem::path& path) const;
  static CheckpointMeta load(const std::filesystem::path& path);
};

std::filesystem::path meta_path_for(const std::filesystem::path& checkpoint);
CheckpointMeta describe(const DdqnAgent& agent);

}  // namespace sidelink::ddqn
