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

#include "baseline_policies.hpp"

namespace sidelink::baselines {

namespace {
// State layout: [occupancy, residual x5 in action order, wifi idle].
double residual(const StateVector& s, env::Action a) {
  return s[1 + static_cast<std::size_t>(env::index_of(a))];
}
}  // namespace

void ThresholdConfig::validate() const {
  if (!(wifi_idle_pivot >= 0.0 && wifi_idle_pivot <= 1.0) ||
      !(licensed_residual_pivot >= 0.0 && licensed_residual_pivot <= 1.0)) {
    throw ConfigError("threshold pivots must lie in [0,1]");
  }
}

env::Action threshold_policy(const StateVector& s, const ThresholdConfig& cfg) {
  using env::Action;
  const double wifi_idle = s[6];
  if (wifi_idle >= cfg.wifi_idle_pivot && residual(s, Action::kSlu5) > 0.0) {
    return Action::kSlu5;
  }
  const Action sidelink =
      residual(s, Action::kSll26) > residual(s, Action::kSll28)
          ? Action::kSll26
          : Action::kSll28;
  if (residual(s, sidelink) >= cfg.licensed_residual_pivot) return sidelink;
  return residual(s, Action::kCc26) > residual(s, Action::kCc28)
             ? Action::kCc26
             : Action::kCc28;
}

env::Action random_policy(Rng& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(kNumActions) - 1);
  return env::action_from_index(pick(rng));
}

}  // namespace sidelink::baselines
