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
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "common.hpp"

// Small fully connected Q-network with hand-written backpropagation and Adam.
//
// Parameters live in one flat vector laid out layer by layer: the weight
// matrix (out x in, row-major) followed by the bias vector. Gradients and
// optimizer moments share that layout, which is also the checkpoint order.
namespace sidelink::nn {

// Activations and dropout masks of one forward pass, consumed by backward().
struct ForwardCache {
  // activations[0] is the input; activations[L] is the output.
  std::vector<std::vector<double>> activations;
  // Per hidden layer: 0 for dropped units, 1/(1-p) for kept ones. Empty when
  // the pass ran without dropout.
  std::vector<std::vector<double>> dropout_scale;
};

class QNetwork {
 public:
  // Input width must be kStateDim and output width kNumActions. Weights are
  // drawn uniform in +-sqrt(6 / fan_in), biases start at zero.
  QNetwork(std::vector<int> layer_sizes, double dropout_rate, Rng& init_rng);

  // Parameters all zero; used by tests and by the checkpoint loader.
  static QNetwork zeros(std::vector<int> layer_sizes, double dropout_rate = 0.0);

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  double dropout_rate() const { return dropout_rate_; }
  std::size_t num_layers() const { return layer_sizes_.size() - 1; }
  std::size_t num_parameters() const { return params_.size(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  // Views into layer `l` (0-based, counting affine layers).
  std::span<double> weights(std::size_t l);
  std::span<double> biases(std::size_t l);
  std::span<const double> weights(std::size_t l) const;
  std::span<const double> biases(std::size_t l) const;

  // Inference-mode pass: no dropout, deterministic.
  QValues q_values(const StateVector& s) const;

  // Training-mode pass with inverted dropout on hidden activations; fills
  // `cache` for backward(). Passing a null rng disables dropout.
  QValues forward(const StateVector& s, ForwardCache& cache,
                  Rng* dropout_rng) const;

  // Accumulates into `grad` the gradient of scale * (target - q[action])^2
  // for the pass stored in `cache`. `grad` must have num_parameters()
  // entries.
  void backward(const ForwardCache& cache, int action, double target,
                std::span<double> grad, double scale = 1.0) const;

  // Gradient of (target - q[action])^2 alone.
  std::vector<double> gradients(const ForwardCache& cache, int action,
                                double target) const;

 private:
  QNetwork(std::vector<int> layer_sizes, double dropout_rate);
  void forward_impl(std::span<const double> input, ForwardCache* cache,
                    Rng* dropout_rng, std::span<double> out) const;

  std::vector<int> layer_sizes_;
  double dropout_rate_;
  std::vector<std::size_t> weight_offset_;
  std::vector<std::size_t> bias_offset_;
  std::vector<double> params_;
};

// Learning-rate milestones: the rate of the last milestone whose step is at
// or below the query step.
class LearningRateSchedule {
 public:
  LearningRateSchedule() = default;
  explicit LearningRateSchedule(std::vector<std::pair<std::uint64_t, double>>
                                    milestones);

  double rate_at(std::uint64_t step) const;
  const std::vector<std::pair<std::uint64_t, double>>& milestones() const {
    return milestones_;
  }

 private:
  std::vector<std::pair<std::uint64_t, double>> milestones_{{0, 1e-3}};
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  LearningRateSchedule schedule;
};

class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t num_parameters, AdamConfig cfg);

  // One bias-corrected update. The learning rate is looked up with the
  // number of updates already applied.
  void step(QNetwork& net, std::span<const double> grad);

  std::uint64_t step_count() const { return step_count_; }
  const AdamConfig& config() const { return cfg_; }
  double current_rate() const { return cfg_.schedule.rate_at(step_count_); }

 private:
  AdamConfig cfg_;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
  std::uint64_t step_count_ = 0;
};

inline void adam_step(QNetwork& net, AdamOptimizer& opt,
                      std::span<const double> grad) {
  opt.step(net, grad);
}

// dst <- src. Throws UsageError on layer-size mismatch.
void copy_parameters(const QNetwork& src, QNetwork& dst);

// Checkpoint I/O; see docs/checkpoint_format.md.
void save_checkpoint(const QNetwork& net, const std::filesystem::path& path);
QNetwork load_checkpoint(const std::filesystem::path& path);

}  // namespace sidelink::nn
