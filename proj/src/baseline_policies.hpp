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

#include "common.hpp"
#include "env.hpp"

namespace sidelink::baselines {

struct ThresholdConfig {
  double wifi_idle_pivot = 0.5;
  double licensed_residual_pivot = 0.5;

  void validate() const;
};

// Static rule: SL-U while the observed Wi-Fi idle probability is at or above
// the pivot and SL-U has residual bandwidth; otherwise the SL-L band with
// the larger residual if it clears the licensed pivot, else the CC band with
// the larger residual. Ties go to the lower action index.
env::Action threshold_policy(const StateVector& s, const ThresholdConfig& cfg);

// Uniform over the five mode-band options.
env::Action random_policy(Rng& rng);

}  // namespace sidelink::baselines
