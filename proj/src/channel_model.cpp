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

#include "channel_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace sidelink::channel {

void LinkGeometry::validate() const {
  if (!(d3d_m > 0.0) || !std::isfinite(d3d_m)) {
    throw ConfigError("link geometry: d3d must be positive, got " +
                      std::to_string(d3d_m));
  }
  if (!(rx_height_m > 0.0) || !(tx_height_m > rx_height_m)) {
    throw ConfigError("link geometry: heights must satisfy h_t > h_r > 0");
  }
  if (!(fc_ghz > 0.0) || !std::isfinite(fc_ghz)) {
    throw ConfigError("link geometry: carrier frequency must be positive");
  }
}

void LinkBudget::validate() const {
  if (!(tx_power_w > 0.0) || !(noise_psd_w_per_hz > 0.0) ||
      !(bandwidth_hz > 0.0)) {
    throw ConfigError("link budget: power, noise density and bandwidth must "
                      "be positive");
  }
  if (!(pathloss_db >= 0.0)) {
    throw ConfigError("link budget: path loss must be non-negative");
  }
}

double breakpoint_distance(const LinkGeometry& g) {
  g.validate();
  return 4.0 * g.tx_height_m * g.rx_height_m * (g.fc_ghz * 1e9) /
         kSpeedOfLight;
}

double pathloss_los(const LinkGeometry& g) {
  const double d_bp = breakpoint_distance(g);
  const double freq_term = 20.0 * std::log10(g.fc_ghz);
  if (g.d3d_m <= d_bp) {
    return 32.4 + 21.0 * std::log10(g.d3d_m) + freq_term;
  }
  const double dh = g.tx_height_m - g.rx_height_m;
  return 32.4 + 40.0 * std::log10(g.d3d_m) + freq_term -
         9.5 * std::log10(d_bp * d_bp + dh * dh);
}

double pathloss_nlos(const LinkGeometry& g) {
  const double los = pathloss_los(g);
  const double nlos = 22.4 + 35.3 * std::log10(g.d3d_m) +
                      21.3 * std::log10(g.fc_ghz) -
                      0.3 * (g.rx_height_m - 1.5);
  return std::max(los, nlos);
}

ChannelRealization sample_rician(const LinkGeometry& g, double k_factor,
                                 double nlos_power_scale, Rng& rng) {
  g.validate();
  if (!(k_factor >= 0.0)) {
    throw ConfigError("rician: K-factor must be non-negative");
  }
  if (!(nlos_power_scale > 0.0)) {
    throw ConfigError("rician: NLOS power scale must be positive");
  }
  const double wavelength = kSpeedOfLight / (g.fc_ghz * 1e9);
  const double phase = -2.0 * std::numbers::pi * g.d3d_m / wavelength;
  const std::complex<double> los = std::polar(1.0, phase);

  // Each quadrature carries half of the total NLOS variance. Both draws are
  // consumed even for infinite K so the stream position is K-independent.
  std::normal_distribution<double> gauss(0.0,
                                         std::sqrt(nlos_power_scale / 2.0));
  const double re = gauss(rng);
  const double im = gauss(rng);
  const std::complex<double> nlos{re, im};

  double los_weight = 1.0;
  double nlos_weight = 0.0;
  if (std::isfinite(k_factor)) {
    los_weight = std::sqrt(k_factor / (k_factor + 1.0));
    nlos_weight = std::sqrt(1.0 / (k_factor + 1.0));
  }
  return {los_weight * los + nlos_weight * nlos, k_factor, nlos_power_scale};
}

double snr(const LinkBudget& b, const ChannelRealization& c) {
  b.validate();
  const double attenuation = std::pow(10.0, -b.pathloss_db / 10.0);
  return b.tx_power_w * c.power_gain() * attenuation /
         (b.noise_psd_w_per_hz * b.bandwidth_hz);
}

double link_rate(const LinkBudget& b, const ChannelRealization& c) {
  return b.bandwidth_hz * std::log2(1.0 + snr(b, c));
}

LinkBudget calibrated_budget(double target_snr_db, double bandwidth_hz,
                             double pathloss_db, double noise_psd_w_per_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw ConfigError("calibrated budget: bandwidth must be positive");
  }
  LinkBudget b;
  b.bandwidth_hz = bandwidth_hz;
  b.pathloss_db = pathloss_db;
  b.noise_psd_w_per_hz = noise_psd_w_per_hz;
  b.tx_power_w = db_to_linear(target_snr_db) * noise_psd_w_per_hz *
                 bandwidth_hz * std::pow(10.0, pathloss_db / 10.0);
  b.validate();
  return b;
}

}  // namespace sidelink::channel
