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

#include "coexistence.hpp"

#include <algorithm>

namespace sidelink::coexistence {

namespace {
bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }
}  // namespace

WifiActivityModel::WifiActivityModel(double p_busy_to_idle,
                                     double p_idle_to_busy, WifiState initial)
    : p_busy_to_idle_(p_busy_to_idle),
      p_idle_to_busy_(p_idle_to_busy),
      current_(initial) {
  if (!valid_probability(p_busy_to_idle) ||
      !valid_probability(p_idle_to_busy)) {
    throw ConfigError("wifi model: transition probabilities must lie in [0,1]");
  }
}

WifiState WifiActivityModel::step(Rng& rng) {
  // One uniform draw per slot keeps the stream aligned across states.
  const double u = uniform01(rng);
  if (current_ == WifiState::kIdle) {
    if (u < p_idle_to_busy_) current_ = WifiState::kBusy;
  } else {
    if (u < p_busy_to_idle_) current_ = WifiState::kIdle;
  }
  return current_;
}

void WifiActivityModel::reset_stationary(Rng& rng) {
  const double u = uniform01(rng);
  current_ = u < stationary_idle_probability() ? WifiState::kIdle
                                               : WifiState::kBusy;
}

double WifiActivityModel::stationary_idle_probability() const {
  const double total = p_busy_to_idle_ + p_idle_to_busy_;
  if (total == 0.0) return current_ == WifiState::kIdle ? 1.0 : 0.0;
  return p_busy_to_idle_ / total;
}

IdleEstimator::IdleEstimator(std::size_t window) {
  if (window == 0) {
    throw ConfigError("idle estimator window must be at least one slot");
  }
  ring_.assign(window, 0);
}

double IdleEstimator::update(WifiState sensed) {
  const unsigned char idle = sensed == WifiState::kIdle ? 1 : 0;
  if (filled_ == ring_.size()) {
    idle_count_ -= ring_[cursor_];
  } else {
    ++filled_;
  }
  ring_[cursor_] = idle;
  idle_count_ += idle;
  cursor_ = (cursor_ + 1) % ring_.size();
  return estimate();
}

double IdleEstimator::estimate(double prior) const {
  if (filled_ == 0) return prior;
  return static_cast<double>(idle_count_) / static_cast<double>(filled_);
}

void IdleEstimator::clear() {
  std::fill(ring_.begin(), ring_.end(), 0);
  cursor_ = 0;
  filled_ = 0;
  idle_count_ = 0;
}

}  // namespace sidelink::coexistence
