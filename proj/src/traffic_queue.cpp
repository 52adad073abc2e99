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

#include "traffic_queue.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace sidelink::traffic {

bool PacketQueue::enqueue(const Packet& p) {
  ++arrivals_total_;
  if (contents_.size() >= capacity_) {
    ++blocked_total_;
    return false;
  }
  contents_.push_back(p);
  return true;
}

std::optional<Packet> PacketQueue::head_of_line() const {
  if (contents_.empty()) return std::nullopt;
  return contents_.front();
}

Packet PacketQueue::pop() {
  if (contents_.empty()) {
    throw UsageError("pop from an empty packet queue");
  }
  Packet p = contents_.front();
  contents_.pop_front();
  return p;
}

double PacketQueue::occupancy_ratio() const {
  if (capacity_ == 0) {
    throw ConfigError("queue capacity must be positive to report occupancy");
  }
  return static_cast<double>(contents_.size()) /
         static_cast<double>(capacity_);
}

void PacketQueue::clear() {
  contents_.clear();
  arrivals_total_ = 0;
  blocked_total_ = 0;
}

std::uint64_t sample_arrivals(double lambda_per_slot, Rng& rng) {
  if (!(lambda_per_slot >= 0.0) || !std::isfinite(lambda_per_slot)) {
    throw ConfigError("arrival rate must be a finite non-negative number");
  }
  if (lambda_per_slot == 0.0) return 0;
  std::poisson_distribution<std::uint64_t> poisson(lambda_per_slot);
  return poisson(rng);
}

double mm1k_blocking(double rho, std::size_t k) {
  if (!(rho >= 0.0)) {
    throw ConfigError("offered load must be non-negative");
  }
  if (k == 0) return 1.0;
  if (rho == 0.0) return 0.0;
  const double kk = static_cast<double>(k);
  if (std::abs(rho - 1.0) < 1e-12) return 1.0 / (kk + 1.0);
  // rho^K (1 - rho) / (1 - rho^{K+1})
  const double num = std::pow(rho, kk) * (1.0 - rho);
  const double den = 1.0 - std::pow(rho, kk + 1.0);
  return num / den;
}

double Mm1kSimulation::standard_error() const {
  const std::size_t n = batch_blocking.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double b : batch_blocking) mean += b;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double b : batch_blocking) ss += (b - mean) * (b - mean);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

Mm1kSimulation simulate_mm1k(double rho, std::size_t k, std::uint64_t arrivals,
                             Rng& rng, std::size_t batches) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw ConfigError("M/M/1/K simulation needs a finite positive offered load");
  }
  if (batches == 0 || arrivals < batches) {
    throw ConfigError("M/M/1/K simulation needs at least one arrival per batch");
  }
  PacketQueue queue(k);
  std::exponential_distribution<double> interarrival(rho);
  std::exponential_distribution<double> service(1.0);
  constexpr double kNever = std::numeric_limits<double>::infinity();

  // Stationary occupancy is truncated geometric: P(n) proportional to rho^n.
  std::vector<double> weights(k + 1);
  for (std::size_t n = 0; n <= k; ++n) {
    weights[n] = std::pow(rho, static_cast<double>(n));
  }
  std::discrete_distribution<std::size_t> initial(weights.begin(),
                                                  weights.end());
  std::uint64_t next_id = 0;
  const std::size_t preload = initial(rng);
  for (std::size_t n = 0; n < preload; ++n) {
    queue.enqueue(Packet{next_id++, kDefaultPacketBits, 0});
  }

  double next_arrival = interarrival(rng);
  double next_departure = queue.empty() ? kNever : service(rng);

  Mm1kSimulation result;
  const std::uint64_t per_batch = arrivals / batches;
  std::uint64_t batch_arrivals = 0;
  std::uint64_t batch_blocked = 0;
  while (result.arrivals < arrivals) {
    if (next_arrival < next_departure) {
      const double now = next_arrival;
      const bool was_idle = queue.empty();
      const bool accepted = queue.enqueue(
          Packet{next_id++, kDefaultPacketBits, static_cast<std::uint64_t>(now)});
      ++result.arrivals;
      ++batch_arrivals;
      if (!accepted) {
        ++result.blocked;
        ++batch_blocked;
      }
      if (accepted && was_idle) next_departure = now + service(rng);
      next_arrival = now + interarrival(rng);
      // The last batch absorbs the remainder of arrivals / batches.
      if (batch_arrivals == per_batch &&
          result.batch_blocking.size() + 1 < batches) {
        result.batch_blocking.push_back(static_cast<double>(batch_blocked) /
                                        static_cast<double>(batch_arrivals));
        batch_arrivals = 0;
        batch_blocked = 0;
      }
    } else {
      const double now = next_departure;
      queue.pop();
      next_departure = queue.empty() ? kNever : now + service(rng);
    }
  }
  result.batch_blocking.push_back(static_cast<double>(batch_blocked) /
                                  static_cast<double>(batch_arrivals));
  return result;
}

}  // namespace sidelink::traffic
