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

#include <cstddef>
#include <vector>

#include "common.hpp"

// Wi-Fi occupancy of the unlicensed channel and the listen-before-talk gate.
namespace sidelink::coexistence {

enum class WifiState { kIdle, kBusy };
enum class LbtResult { kGranted, kDenied };

// Two-state Markov chain driving Wi-Fi occupancy, one transition per slot.
// The chain is never influenced by the scheduler.
class WifiActivityModel {
 public:
  WifiActivityModel(double p_busy_to_idle, double p_idle_to_busy,
                    WifiState initial = WifiState::kIdle);

  WifiState step(Rng& rng);

  // Draws the current state from the stationary distribution.
  void reset_stationary(Rng& rng);

  // p_busy_to_idle / (p_busy_to_idle + p_idle_to_busy); a chain with both
  // probabilities zero never leaves its state and reports 1 or 0 accordingly.
  double stationary_idle_probability() const;

  WifiState current() const { return current_; }
  void set_current(WifiState s) { current_ = s; }
  double p_busy_to_idle() const { return p_busy_to_idle_; }
  double p_idle_to_busy() const { return p_idle_to_busy_; }

 private:
  double p_busy_to_idle_;
  double p_idle_to_busy_;
  WifiState current_;
};

inline WifiState step_wifi(WifiActivityModel& m, Rng& rng) {
  return m.step(rng);
}

inline LbtResult lbt_gate(WifiState sensed) {
  return sensed == WifiState::kIdle ? LbtResult::kGranted : LbtResult::kDenied;
}

// Sliding-window fraction of sensing instants that found the channel idle.
class IdleEstimator {
 public:
  explicit IdleEstimator(std::size_t window);

  // Pushes one sensing outcome and returns the updated estimate.
  double update(WifiState sensed);

  // Undefined before the first update; returns `prior` in that case.
  double estimate(double prior = 0.5) const;

  void clear();

  std::size_t window() const { return ring_.size(); }
  std::size_t occupancy() const { return filled_; }

 private:
  std::vector<unsigned char> ring_;
  std::size_t cursor_ = 0;
  std::size_t filled_ = 0;
  std::size_t idle_count_ = 0;
};

inline double update_estimate(IdleEstimator& e, WifiState sensed) {
  return e.update(sensed);
}

}  // namespace sidelink::coexistence
