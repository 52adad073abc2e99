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

#include <cmath>
#include <complex>

#include "common.hpp"

// Large-scale UMi street-canyon path loss, Rician small-scale fading and the
// Shannon rate of a single mode-band link.
namespace sidelink::channel {

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s
// Thermal noise floor, -174 dBm/Hz.
inline constexpr double kThermalNoisePsd = 3.981071705534972e-21;  // W/Hz

struct LinkGeometry {
  double d3d_m = 1.0;
  double tx_height_m = 10.0;
  double rx_height_m = 1.5;
  double fc_ghz = 28.0;

  // Throws ConfigError unless d3d > 0, h_t > h_r > 0 and fc > 0.
  void validate() const;
};

struct ChannelRealization {
  std::complex<double> h{1.0, 0.0};
  double k_factor = 0.0;
  double nlos_power_scale = 1.0;

  double power_gain() const { return std::norm(h); }
};

struct LinkBudget {
  double tx_power_w = 1.0;
  double noise_psd_w_per_hz = kThermalNoisePsd;
  double bandwidth_hz = 1.0;
  double pathloss_db = 0.0;

  void validate() const;
};

/// 4 h_t h_r f_c / c, with f_c in Hz.
double breakpoint_distance(const LinkGeometry& g);

/// Two-slope LOS path loss in dB (f_c in GHz inside the log terms).
double pathloss_los(const LinkGeometry& g);

/// max(LOS, NLOS empirical fit) in dB.
double pathloss_nlos(const LinkGeometry& g);

/// Draws H = sqrt(K/(K+1)) e^{-j 2 pi d / lambda} + sqrt(1/(K+1)) z with
/// z ~ CN(0, nlos_power_scale). An infinite K yields the pure LOS phasor.
ChannelRealization sample_rician(const LinkGeometry& g, double k_factor,
                                 double nlos_power_scale, Rng& rng);

/// P_t |h|^2 10^{-PL/10} / (N_0 B).
double snr(const LinkBudget& b, const ChannelRealization& c);

/// B log2(1 + SNR), bits per second.
double link_rate(const LinkBudget& b, const ChannelRealization& c);

// Back-solves the transmit power so that snr() at |h|^2 = 1 and the given
// path loss equals the target.
LinkBudget calibrated_budget(double target_snr_db, double bandwidth_hz,
                             double pathloss_db = 0.0,
                             double noise_psd_w_per_hz = kThermalNoisePsd);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace sidelink::channel
