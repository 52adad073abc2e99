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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "channel_model.hpp"
#include "coexistence.hpp"
#include "common.hpp"
#include "traffic_queue.hpp"

namespace sidelink::env {

enum class Action : int {
  kCc28 = 0,
  kCc26 = 1,
  kSll28 = 2,
  kSll26 = 3,
  kSlu5 = 4,
};

inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::kCc28, Action::kCc26, Action::kSll28, Action::kSll26,
    Action::kSlu5};

inline constexpr int index_of(Action a) { return static_cast<int>(a); }
Action action_from_index(int index);
std::string_view action_name(Action a);
inline bool is_licensed(Action a) { return a != Action::kSlu5; }

enum class ChannelMode { kStaticPerEpisode, kDynamicPerPacket };
enum class ServiceModel { kPhysical, kExponential };
enum class WifiObservation { kEstimate, kStationary };

std::string_view to_string(ChannelMode m);
ChannelMode channel_mode_from_string(std::string_view s);

// Result of the dispatch attempt made in one epoch. Buffer overflow is
// tracked separately in EpochReport::overflow because an epoch can both drop
// arrivals and dispatch the head-of-line packet.
enum class Outcome { kSent, kBlockedNoBandwidth, kBlockedLbt, kIdle };
std::string_view to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

struct EpochReport {
  std::uint64_t slot = 0;
  Action action = Action::kCc28;
  Outcome outcome = Outcome::kIdle;
  std::uint32_t arrivals = 0;
  std::uint32_t overflow = 0;
  double rate_bps = 0.0;
  double reward = 0.0;
  double delivered_bits = 0.0;
};

struct EnvConfig {
  double licensed_budget_bps = 500e6;
  // Fraction of the licensed budget given to each licensed option
  // (CC-28G, CC-26G, SL-L-28G, SL-L-26G).
  std::array<double, 4> licensed_split = {0.25, 0.25, 0.25, 0.25};
  double unlicensed_bw_hz = 100e6;
  ChannelMode channel_mode = ChannelMode::kDynamicPerPacket;
  std::array<double, kNumActions> snr_targets_db = {40.0, 40.0, 13.0, 13.0,
                                                    0.0};
  double cc_distance_m = 100.0;
  double sl_distance_m = 5.0;
  double gnb_height_m = 10.0;
  double ue_height_m = 1.5;
  double sl_tx_height_m = 2.0;
  double k_factor = 10.0;
  double nlos_power_scale = 1.0;
  bool line_of_sight = true;
  double arrival_rate = 0.04;  // packets per slot
  std::size_t queue_capacity = 20;
  std::size_t episode_length = 1000;
  double slot_seconds = 1e-3;
  double packet_bits = traffic::kDefaultPacketBits;
  double wifi_p_busy_to_idle = 0.5;
  double wifi_p_idle_to_busy = 0.5;
  std::size_t wifi_window = 100;
  WifiObservation wifi_observation = WifiObservation::kEstimate;
  // Fraction of an option's nominal bandwidth held by one dispatch.
  std::array<double, kNumActions> dispatch_share = {1.0, 1.0, 1.0, 1.0, 1.0};
  ServiceModel service_model = ServiceModel::kPhysical;
  // Mean holding time in slots under the exponential (validation) model.
  double exponential_service_slots = 10.0;
  std::uint64_t seed = 1;

  void validate() const;
};

// Static description of one mode-band option derived from EnvConfig.
struct LinkProfile {
  channel::LinkGeometry geometry;
  double snr_target_db = 0.0;
  double nominal_bw_hz = 0.0;
  double dispatch_bw_hz = 0.0;
  double pathloss_db = 0.0;
  channel::LinkBudget budget;
};

std::array<LinkProfile, kNumActions> build_link_profiles(const EnvConfig& cfg);

struct StepResult {
  double reward = 0.0;
  StateVector next_state{};
  bool terminal = false;
  EpochReport report;
};

// Episodic environment seen by the trainer and the evaluation loop.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual StateVector reset() = 0;
  virtual StepResult step(int action) = 0;
  virtual StateVector observe() const = 0;
  virtual bool episode_done() const = 0;
};

struct BandHold {
  Action action;
  double bandwidth_hz;
  std::uint64_t slots_remaining;
};

// Licensed/unlicensed scheduling MDP: one head-of-line dispatch per slot.
class SidelinkEnv final : public Environment {
 public:
  explicit SidelinkEnv(EnvConfig cfg);

  StateVector reset() override;
  StepResult step(int action) override;
  StateVector observe() const override;
  bool episode_done() const override { return slot_ >= cfg_.episode_length; }

  const EnvConfig& config() const { return cfg_; }
  const std::array<LinkProfile, kNumActions>& links() const { return links_; }
  double reward_normalizer() const { return reward_normalizer_; }

  double available_bw(Action a) const;
  double held_bw(Action a) const;
  double residual_ratio(Action a) const;
  const std::vector<BandHold>& holds() const { return holds_; }
  const traffic::PacketQueue& queue() const { return queue_; }
  traffic::PacketQueue& mutable_queue() { return queue_; }
  coexistence::WifiState wifi_state() const { return wifi_.current(); }
  double wifi_idle_observation() const;
  std::uint64_t slot() const { return slot_; }
  const std::array<channel::ChannelRealization, kNumActions>&
  static_channels() const {
    return static_channels_;
  }

  // Test hooks: pin the Wi-Fi state or place a hold directly.
  void force_wifi_state(coexistence::WifiState s) { wifi_.set_current(s); }
  void force_hold(Action a, double bandwidth_hz, std::uint64_t slots);

 private:
  void release_finished_holds();
  std::uint64_t holding_slots(double rate_bps);

  EnvConfig cfg_;
  std::array<LinkProfile, kNumActions> links_;
  double reward_normalizer_ = 1.0;

  Rng arrival_rng_;
  Rng wifi_rng_;
  Rng channel_rng_;
  Rng service_rng_;

  traffic::PacketQueue queue_;
  coexistence::WifiActivityModel wifi_;
  coexistence::IdleEstimator estimator_;
  std::vector<BandHold> holds_;
  std::array<channel::ChannelRealization, kNumActions> static_channels_{};
  std::uint64_t slot_ = 0;
  std::uint64_t next_packet_id_ = 0;
  bool initialized_ = false;
};

// One-state, five-armed bandit with deterministic rewards; every transition
// ends an episode.
class BanditEnv final : public Environment {
 public:
  explicit BanditEnv(QValues rewards);

  StateVector reset() override;
  StepResult step(int action) override;
  StateVector observe() const override { return state_; }
  bool episode_done() const override { return done_; }

  int best_action() const;

 private:
  QValues rewards_;
  StateVector state_;
  bool done_ = true;
  std::uint64_t slot_ = 0;
};

// Running totals over a horizon of EpochReports.
struct BlockingTally {
  std::uint64_t epochs = 0;
  std::uint64_t arrivals = 0;
  std::uint64_t attempts = 0;
  std::uint64_t sent = 0;
  std::uint64_t blocked_overflow = 0;
  std::uint64_t blocked_no_bandwidth = 0;
  std::uint64_t blocked_lbt = 0;
  double delivered_bits = 0.0;

  void add(const EpochReport& r);
  std::uint64_t blocked() const {
    return blocked_overflow + blocked_no_bandwidth + blocked_lbt;
  }
  // Arrivals offered to the buffer plus head-of-line packets offered to a
  // band.
  std::uint64_t presented() const { return arrivals + attempts; }
};

// Blocked events of every cause over packets presented; absent when the
// horizon saw no arrivals.
std::optional<double> blocking_probability(std::span<const EpochReport> reports);
std::optional<double> blocking_probability(const BlockingTally& tally);

// Delivered bits per second of simulated time.
double mean_throughput(std::span<const EpochReport> reports,
                       double slot_seconds);
double mean_throughput(const BlockingTally& tally, double slot_seconds);

}  // namespace sidelink::env
