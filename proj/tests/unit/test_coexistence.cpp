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

#include <cmath>

#include <doctest.h>

#include "coexistence.hpp"

using namespace sidelink;
using namespace sidelink::coexistence;

namespace {

double long_run_idle(double p_bi, double p_ib, std::uint64_t seed, int slots) {
  WifiActivityModel m(p_bi, p_ib);
  Rng rng(seed);
  int idle = 0;
  for (int i = 0; i < slots; ++i) {
    if (step_wifi(m, rng) == WifiState::kIdle) ++idle;
  }
  return static_cast<double>(idle) / slots;
}

}  // namespace

TEST_SUITE("coexistence") {

TEST_CASE("idle is absorbing when the chain cannot turn busy") {
  WifiActivityModel m(0.3, 0.0, WifiState::kIdle);
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) CHECK(step_wifi(m, rng) == WifiState::kIdle);
}

TEST_CASE("long-run idle fraction equals the stationary probability") {
  CHECK(std::abs(long_run_idle(0.5, 0.5, 7, 1000000) - 0.5) < 0.01);
  CHECK(std::abs(long_run_idle(0.9, 0.1, 8, 1000000) - 0.9) < 0.01);
  // Temporally correlated chain with the same stationary point.
  CHECK(std::abs(long_run_idle(0.05, 0.05, 9, 1000000) - 0.5) < 0.01);
}

TEST_CASE("stationary probability") {
  CHECK(WifiActivityModel(0.9, 0.1).stationary_idle_probability() ==
        doctest::Approx(0.9));
  CHECK(WifiActivityModel(0.2, 0.6).stationary_idle_probability() ==
        doctest::Approx(0.25));
  CHECK(WifiActivityModel(0, 0, WifiState::kBusy)
            .stationary_idle_probability() == 0.0);
  CHECK_THROWS_AS(WifiActivityModel(1.5, 0.1), ConfigError);
  CHECK_THROWS_AS(WifiActivityModel(0.5, -0.1), ConfigError);
}

TEST_CASE("stationary reset draws from the stationary distribution") {
  WifiActivityModel m(0.8, 0.2);
  Rng rng(3);
  int idle = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    m.reset_stationary(rng);
    if (m.current() == WifiState::kIdle) ++idle;
  }
  CHECK(std::abs(static_cast<double>(idle) / n - 0.8) < 0.005);
}

TEST_CASE("LBT grants only an idle channel") {
  CHECK(lbt_gate(WifiState::kIdle) == LbtResult::kGranted);
  CHECK(lbt_gate(WifiState::kBusy) == LbtResult::kDenied);
  // Deterministic in the sensed state.
  for (int i = 0; i < 10; ++i) {
    CHECK(lbt_gate(WifiState::kBusy) == LbtResult::kDenied);
  }
}

TEST_CASE("idle estimator counts the window") {
  IdleEstimator all_idle(5);
  for (int i = 0; i < 5; ++i) update_estimate(all_idle, WifiState::kIdle);
  CHECK(all_idle.estimate() == 1.0);

  IdleEstimator all_busy(5);
  for (int i = 0; i < 5; ++i) update_estimate(all_busy, WifiState::kBusy);
  CHECK(all_busy.estimate() == 0.0);

  IdleEstimator ten(10);
  double last = 0.0;
  for (int i = 0; i < 10; ++i) {
    last = update_estimate(ten, i < 7 ? WifiState::kIdle : WifiState::kBusy);
  }
  CHECK(last == doctest::Approx(0.7));
}

TEST_CASE("idle estimator slides and handles a partial window") {
  IdleEstimator e(4);
  CHECK(e.estimate(0.42) == 0.42);
  CHECK(e.update(WifiState::kIdle) == 1.0);
  CHECK(e.update(WifiState::kBusy) == 0.5);
  e.update(WifiState::kBusy);
  e.update(WifiState::kBusy);
  CHECK(e.estimate() == 0.25);
  // The first idle sample leaves the window.
  CHECK(e.update(WifiState::kBusy) == 0.0);
  CHECK(e.occupancy() == 4);
  e.clear();
  CHECK(e.occupancy() == 0);
  CHECK_THROWS_AS(IdleEstimator(0), ConfigError);
}

TEST_CASE("estimator converges to the stationary idle probability") {
  const std::size_t window = 100;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (auto [p_bi, p_ib] : {std::pair{0.5, 0.5}, std::pair{0.9, 0.1},
                              std::pair{0.3, 0.1}}) {
      WifiActivityModel m(p_bi, p_ib);
      Rng rng(seed);
      m.reset_stationary(rng);
      IdleEstimator e(window);
      for (std::size_t i = 0; i < 10 * window; ++i) e.update(m.step(rng));
      CAPTURE(seed);
      CAPTURE(p_bi);
      CHECK(std::abs(e.estimate() - m.stationary_idle_probability()) <= 0.2);
    }
  }
}

TEST_CASE("estimator average error is within 0.05 across seeds") {
  const std::size_t window = 100;
  double total_error = 0.0;
  const int seeds = 200;
  for (int seed = 0; seed < seeds; ++seed) {
    WifiActivityModel m(0.5, 0.5);
    Rng rng(static_cast<std::uint64_t>(seed) + 1000);
    m.reset_stationary(rng);
    IdleEstimator e(window);
    for (std::size_t i = 0; i < 10 * window; ++i) e.update(m.step(rng));
    total_error += std::abs(e.estimate() - 0.5);
  }
  CHECK(total_error / seeds <= 0.05);
}

}  // TEST_SUITE
