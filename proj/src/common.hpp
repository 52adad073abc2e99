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
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sidelink {

// Error categories surfaced through the C API as distinct status codes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kStateDim = 7;
inline constexpr std::size_t kNumActions = 5;

using StateVector = std::array<double, kStateDim>;
using QValues = std::array<double, kNumActions>;

using Rng = std::mt19937_64;

// Independent random streams derived from one experiment seed. Keeping the
// components on separate streams means that changing, e.g., the policy does
// not perturb the arrival or Wi-Fi sequences (common random numbers across
// sweep points).
enum class Stream : std::uint32_t {
  kArrivals = 1,
  kWifi = 2,
  kChannel = 3,
  kPolicy = 4,
  kExploration = 5,
  kReplay = 6,
  kDropout = 7,
  kInit = 8,
  kService = 9,
};

inline Rng make_stream(std::uint64_t seed, Stream stream,
                       std::uint32_t salt = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), salt};
  return Rng(seq);
}

inline double uniform01(Rng& rng) {
  return std::generate_canonical<double, 53>(rng);
}

}  // namespace sidelink
