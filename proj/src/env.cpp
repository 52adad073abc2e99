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

#include "env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sidelink::env {

namespace {

constexpr std::array<std::string_view, kNumActions> kActionNames = {
    "CC_28G", "CC_26G", "SLL_28G", "SLL_26G", "SLU_5G"};

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

Action action_from_index(int index) {
  if (index < 0 || index >= static_cast<int>(kNumActions)) {
    throw UsageError("action index out of range: " + std::to_string(index));
  }
  return static_cast<Action>(index);
}

std::string_view action_name(Action a) {
  return kActionNames[static_cast<std::size_t>(index_of(a))];
}

std::string_view to_string(ChannelMode m) {
  return m == ChannelMode::kStaticPerEpisode ? "static_per_episode"
                                             : "dynamic_per_packet";
}

ChannelMode channel_mode_from_string(std::string_view s) {
  if (s == "static_per_episode") return ChannelMode::kStaticPerEpisode;
  if (s == "dynamic_per_packet") return ChannelMode::kDynamicPerPacket;
  throw ConfigError("unknown channel_mode '" + std::string(s) + "'");
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kSent: return "sent";
    case Outcome::kBlockedNoBandwidth: return "blocked_no_bandwidth";
    case Outcome::kBlockedLbt: return "blocked_lbt";
    case Outcome::kIdle: return "idle";
  }
  return "idle";
}

Outcome outcome_from_string(std::string_view s) {
  if (s == "sent") return Outcome::kSent;
  if (s == "blocked_no_bandwidth") return Outcome::kBlockedNoBandwidth;
  if (s == "blocked_lbt") return Outcome::kBlockedLbt;
  if (s == "idle") return Outcome::kIdle;
  throw ConfigError("unknown outcome '" + std::string(s) + "'");
}

void EnvConfig::validate() const {
  if (!(licensed_budget_bps > 0.0)) {
    throw ConfigError("env: licensed_budget_bps must be positive");
  }
  if (!(unlicensed_bw_hz > 0.0)) {
    throw ConfigError("env: unlicensed_bw_hz must be positive");
  }
  for (double s : licensed_split) {
    if (!(s > 0.0)) {
      throw ConfigError("env: licensed_split entries must be positive");
    }
  }
  if (!(cc_distance_m > 0.0) || !(sl_distance_m > 0.0)) {
    throw ConfigError("env: link distances must be positive");
  }
  if (!(k_factor >= 0.0) || !(nlos_power_scale > 0.0)) {
    throw ConfigError("env: k_factor must be >= 0 and nlos_power_scale > 0");
  }
  if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate)) {
    throw ConfigError("env: arrival_rate must be a finite non-negative rate");
  }
  if (queue_capacity == 0) {
    throw ConfigError("env: queue_capacity must be at least 1");
  }
  if (episode_length == 0) {
    throw ConfigError("env: episode_length must be at least 1");
  }
  if (!(slot_seconds > 0.0) || !(packet_bits > 0.0)) {
    throw ConfigError("env: slot_seconds and packet_bits must be positive");
  }
  if (!in_unit_interval(wifi_p_busy_to_idle) ||
      !in_unit_interval(wifi_p_idle_to_busy)) {
    throw ConfigError("env: wifi transition probabilities must lie in [0,1]");
  }
  if (wifi_window == 0) {
    throw ConfigError("env: wifi_window must be at least 1");
  }
  for (double s : dispatch_share) {
    if (!(s > 0.0) || !(s <= 1.0)) {
      throw ConfigError("env: dispatch_share entries must lie in (0,1]");
    }
  }
  if (service_model == ServiceModel::kExponential &&
      !(exponential_service_slots >= 1.0)) {
    throw ConfigError("env: exponential_service_slots must be >= 1");
  }
}

std::array<LinkProfile, kNumActions> build_link_profiles(const EnvConfig& cfg) {
  cfg.validate();
  std::array<LinkProfile, kNumActions> links;
  constexpr std::array<double, kNumActions> kCarrierGhz = {28.0, 26.0, 28.0,
                                                           26.0, 5.0};
  for (std::size_t i = 0; i < kNumActions; ++i) {
    const Action a = static_cast<Action>(i);
    LinkProfile& link = links[i];
    const bool cellular = a == Action::kCc28 || a == Action::kCc26;
    link.geometry.d3d_m = cellular ? cfg.cc_distance_m : cfg.sl_distance_m;
    link.geometry.tx_height_m = cellular ? cfg.gnb_height_m : cfg.sl_tx_height_m;
    link.geometry.rx_height_m = cfg.ue_height_m;
    link.geometry.fc_ghz = kCarrierGhz[i];
    link.geometry.validate();
    link.snr_target_db = cfg.snr_targets_db[i];
    const double spectral_eff =
        std::log2(1.0 + channel::db_to_linear(link.snr_target_db));
    if (is_licensed(a)) {
      link.nominal_bw_hz =
          cfg.licensed_budget_bps * cfg.licensed_split[i] / spectral_eff;
    } else {
      link.nominal_bw_hz = cfg.unlicensed_bw_hz;
    }
    link.dispatch_bw_hz = link.nominal_bw_hz * cfg.dispatch_share[i];
    link.pathloss_db = cfg.line_of_sight ? channel::pathloss_los(link.geometry)
                                         : channel::pathloss_nlos(link.geometry);
    link.budget = channel::calibrated_budget(
        link.snr_target_db, link.dispatch_bw_hz, link.pathloss_db);
  }
  return links;
}

SidelinkEnv::SidelinkEnv(EnvConfig cfg)
    : cfg_(std::move(cfg)),
      links_(build_link_profiles(cfg_)),
      arrival_rng_(make_stream(cfg_.seed, Stream::kArrivals)),
      wifi_rng_(make_stream(cfg_.seed, Stream::kWifi)),
      channel_rng_(make_stream(cfg_.seed, Stream::kChannel)),
      service_rng_(make_stream(cfg_.seed, Stream::kService)),
      queue_(cfg_.queue_capacity),
      wifi_(cfg_.wifi_p_busy_to_idle, cfg_.wifi_p_idle_to_busy),
      estimator_(cfg_.wifi_window) {
  double max_bw = 0.0;
  double max_snr = 0.0;
  for (const LinkProfile& link : links_) {
    max_bw = std::max(max_bw, link.nominal_bw_hz);
    max_snr = std::max(max_snr, channel::db_to_linear(link.snr_target_db));
  }
  reward_normalizer_ = max_bw * std::log2(1.0 + max_snr);
}

StateVector SidelinkEnv::reset() {
  queue_.clear();
  holds_.clear();
  slot_ = 0;
  wifi_.reset_stationary(wifi_rng_);
  estimator_.clear();
  // Sense for one full window before the first decision so the estimate is
  // meaningful from slot zero.
  estimator_.update(wifi_.current());
  for (std::size_t i = 1; i < cfg_.wifi_window; ++i) {
    estimator_.update(wifi_.step(wifi_rng_));
  }
  for (std::size_t i = 0; i < kNumActions; ++i) {
    static_channels_[i] =
        channel::sample_rician(links_[i].geometry, cfg_.k_factor,
                               cfg_.nlos_power_scale, channel_rng_);
  }
  initialized_ = true;
  return observe();
}

double SidelinkEnv::held_bw(Action a) const {
  double held = 0.0;
  for (const BandHold& h : holds_) {
    if (h.action == a) held += h.bandwidth_hz;
  }
  return held;
}

double SidelinkEnv::available_bw(Action a) const {
  const double nominal = links_[static_cast<std::size_t>(index_of(a))]
                             .nominal_bw_hz;
  return std::max(0.0, nominal - held_bw(a));
}

double SidelinkEnv::residual_ratio(Action a) const {
  const double nominal = links_[static_cast<std::size_t>(index_of(a))]
                             .nominal_bw_hz;
  return std::clamp(available_bw(a) / nominal, 0.0, 1.0);
}

double SidelinkEnv::wifi_idle_observation() const {
  if (cfg_.wifi_observation == WifiObservation::kStationary) {
    return wifi_.stationary_idle_probability();
  }
  return estimator_.estimate(wifi_.stationary_idle_probability());
}

StateVector SidelinkEnv::observe() const {
  if (!initialized_) {
    throw UsageError("environment observed before reset");
  }
  StateVector s{};
  s[0] = queue_.occupancy_ratio();
  for (std::size_t i = 0; i < kNumActions; ++i) {
    s[1 + i] = residual_ratio(static_cast<Action>(i));
  }
  s[6] = wifi_idle_observation();
  return s;
}

void SidelinkEnv::force_hold(Action a, double bandwidth_hz,
                             std::uint64_t slots) {
  if (bandwidth_hz > available_bw(a) * (1.0 + 1e-12)) {
    throw UsageError("forced hold exceeds available bandwidth");
  }
  holds_.push_back({a, bandwidth_hz, slots});
}

std::uint64_t SidelinkEnv::holding_slots(double rate_bps) {
  if (cfg_.service_model == ServiceModel::kExponential) {
    std::geometric_distribution<std::uint64_t> geo(
        1.0 / cfg_.exponential_service_slots);
    return geo(service_rng_) + 1;
  }
  const double slots = cfg_.packet_bits / (rate_bps * cfg_.slot_seconds);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(slots)));
}

void SidelinkEnv::release_finished_holds() {
  for (BandHold& h : holds_) --h.slots_remaining;
  std::erase_if(holds_, [](const BandHold& h) { return h.slots_remaining == 0; });
}

StepResult SidelinkEnv::step(int action_index) {
  if (!initialized_) throw UsageError("environment stepped before reset");
  if (episode_done()) {
    throw UsageError("step called on a finished episode; call reset first");
  }
  const Action action = action_from_index(action_index);
  const auto idx = static_cast<std::size_t>(action_index);

  EpochReport report;
  report.slot = slot_;
  report.action = action;

  if (!queue_.empty()) {
    const LinkProfile& link = links_[idx];
    if (available_bw(action) < link.dispatch_bw_hz * (1.0 - 1e-12)) {
      report.outcome = Outcome::kBlockedNoBandwidth;
    } else if (action == Action::kSlu5 &&
               coexistence::lbt_gate(wifi_.current()) ==
                   coexistence::LbtResult::kDenied) {
      report.outcome = Outcome::kBlockedLbt;
    } else {
      const channel::ChannelRealization realization =
          cfg_.channel_mode == ChannelMode::kDynamicPerPacket
              ? channel::sample_rician(link.geometry, cfg_.k_factor,
                                       cfg_.nlos_power_scale, channel_rng_)
              : static_channels_[idx];
      const double rate = channel::link_rate(link.budget, realization);
      if (rate > 0.0) {
        const traffic::Packet packet = queue_.pop();
        holds_.push_back({action, link.dispatch_bw_hz, holding_slots(rate)});
        report.outcome = Outcome::kSent;
        report.rate_bps = rate;
        report.reward = rate / reward_normalizer_;
        report.delivered_bits = packet.size_bits;
      } else {
        report.outcome = Outcome::kBlockedNoBandwidth;
      }
    }
  }

  // Packets arriving during this slot become visible in the next
  // observation and are eligible for dispatch from the next epoch on.
  const std::uint64_t arrivals =
      traffic::sample_arrivals(cfg_.arrival_rate, arrival_rng_);
  report.arrivals = static_cast<std::uint32_t>(arrivals);
  for (std::uint64_t i = 0; i < arrivals; ++i) {
    if (!queue_.enqueue({next_packet_id_++, cfg_.packet_bits, slot_})) {
      ++report.overflow;
    }
  }

  // The incumbent evolves independently of the scheduler.
  estimator_.update(wifi_.step(wifi_rng_));
  release_finished_holds();
  ++slot_;

  StepResult result;
  result.reward = report.reward;
  result.report = report;
  result.next_state = observe();
  result.terminal = episode_done();
  return result;
}

BanditEnv::BanditEnv(QValues rewards) : rewards_(rewards) {
  state_.fill(0.5);
  state_[0] = 0.0;
}

StateVector BanditEnv::reset() {
  done_ = false;
  return state_;
}

StepResult BanditEnv::step(int action_index) {
  if (done_) throw UsageError("bandit stepped after its single epoch");
  const Action action = action_from_index(action_index);
  StepResult result;
  result.reward = rewards_[static_cast<std::size_t>(action_index)];
  result.next_state = state_;
  result.terminal = true;
  result.report.slot = slot_++;
  result.report.action = action;
  result.report.outcome = Outcome::kSent;
  result.report.rate_bps = result.reward;
  result.report.reward = result.reward;
  done_ = true;
  return result;
}

int BanditEnv::best_action() const {
  return static_cast<int>(std::max_element(rewards_.begin(), rewards_.end()) -
                          rewards_.begin());
}

void BlockingTally::add(const EpochReport& r) {
  ++epochs;
  arrivals += r.arrivals;
  blocked_overflow += r.overflow;
  switch (r.outcome) {
    case Outcome::kSent:
      ++attempts;
      ++sent;
      delivered_bits += r.delivered_bits;
      break;
    case Outcome::kBlockedNoBandwidth:
      ++attempts;
      ++blocked_no_bandwidth;
      break;
    case Outcome::kBlockedLbt:
      ++attempts;
      ++blocked_lbt;
      break;
    case Outcome::kIdle:
      break;
  }
}

std::optional<double> blocking_probability(const BlockingTally& tally) {
  if (tally.arrivals == 0) return std::nullopt;
  return static_cast<double>(tally.blocked()) /
         static_cast<double>(tally.presented());
}

std::optional<double> blocking_probability(
    std::span<const EpochReport> reports) {
  BlockingTally tally;
  for (const EpochReport& r : reports) tally.add(r);
  return blocking_probability(tally);
}

double mean_throughput(const BlockingTally& tally, double slot_seconds) {
  if (tally.epochs == 0) return 0.0;
  return tally.delivered_bits /
         (static_cast<double>(tally.epochs) * slot_seconds);
}

double mean_throughput(std::span<const EpochReport> reports,
                       double slot_seconds) {
  BlockingTally tally;
  for (const EpochReport& r : reports) tally.add(r);
  return mean_throughput(tally, slot_seconds);
}

}  // namespace sidelink::env
