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

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "common.hpp"

namespace sidelink::traffic {

// 0.5 MByte session.
inline constexpr double kDefaultPacketBits = 4.0e6;

struct Packet {
  std::uint64_t id = 0;
  double size_bits = kDefaultPacketBits;
  std::uint64_t arrival_slot = 0;
};

// Finite FIFO buffer; arrivals beyond capacity are blocked on the spot.
class PacketQueue {
 public:
  explicit PacketQueue(std::size_t capacity) : capacity_(capacity) {}

  // Appends p if there is room. A rejected packet bumps the blocked counter.
  bool enqueue(const Packet& p);

  std::optional<Packet> head_of_line() const;

  // Removes the head-of-line packet; UsageError on an empty queue.
  Packet pop();

  // len/capacity. A zero-capacity queue has no meaningful ratio and throws
  // ConfigError.
  double occupancy_ratio() const;

  void clear();

  std::size_t size() const { return contents_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return contents_.empty(); }
  bool full() const { return contents_.size() >= capacity_; }

  std::uint64_t arrivals_total() const { return arrivals_total_; }
  std::uint64_t blocked_total() const { return blocked_total_; }
  std::uint64_t accepted_total() const {
    return arrivals_total_ - blocked_total_;
  }

 private:
  std::size_t capacity_;
  std::deque<Packet> contents_;
  std::uint64_t arrivals_total_ = 0;
  std::uint64_t blocked_total_ = 0;
};

// Poisson-distributed number of arrivals in one slot.
std::uint64_t sample_arrivals(double lambda_per_slot, Rng& rng);

// Analytic blocking probability of an M/M/1/K system, K counting the packet
// in service. K = 0 blocks everything.
double mm1k_blocking(double rho, std::size_t k);

struct Mm1kSimulation {
  std::uint64_t arrivals = 0;
  std::uint64_t blocked = 0;
  // Blocking fraction of each consecutive batch of arrivals.
  std::vector<double> batch_blocking;

  double blocking() const {
    return arrivals == 0 ? 0.0
                         : static_cast<double>(blocked) /
                               static_cast<double>(arrivals);
  }
  // Batch-means standard error of blocking(); 0 with fewer than two batches.
  double standard_error() const;
};

// Event-driven M/M/1/K run on top of PacketQueue: exponential interarrival
// times with rate rho, exponential service with unit rate, until `arrivals`
// packets have been offered. The head-of-line packet is the one in service.
// The system starts from a draw of its stationary occupancy so there is no
// warm-up transient.
Mm1kSimulation simulate_mm1k(double rho, std::size_t k, std::uint64_t arrivals,
                             Rng& rng, std::size_t batches = 20);

}  // namespace sidelink::traffic
