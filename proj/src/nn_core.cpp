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

#include "nn_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

namespace sidelink::nn {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'Q', 'N'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr double kOutputInitGain = 0.01;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::filesystem::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) {
    throw IoError("truncated checkpoint: " + path.string());
  }
  return value;
}

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2) {
    throw ConfigError("network needs at least an input and an output layer");
  }
  for (int s : sizes) {
    if (s <= 0) throw ConfigError("layer sizes must be positive");
  }
  if (sizes.front() != static_cast<int>(kStateDim) ||
      sizes.back() != static_cast<int>(kNumActions)) {
    throw ConfigError("Q-network must map " + std::to_string(kStateDim) +
                      " inputs to " + std::to_string(kNumActions) +
                      " outputs");
  }
}

std::vector<double>& scratch_mask() {
  thread_local std::vector<double> mask;
  return mask;
}

}  // namespace

QNetwork::QNetwork(std::vector<int> layer_sizes, double dropout_rate)
    : layer_sizes_(std::move(layer_sizes)), dropout_rate_(dropout_rate) {
  check_sizes(layer_sizes_);
  if (!(dropout_rate_ >= 0.0 && dropout_rate_ < 1.0)) {
    throw ConfigError("dropout rate must lie in [0,1)");
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    const auto in = static_cast<std::size_t>(layer_sizes_[l]);
    const auto out = static_cast<std::size_t>(layer_sizes_[l + 1]);
    weight_offset_.push_back(offset);
    offset += in * out;
    bias_offset_.push_back(offset);
    offset += out;
  }
  params_.assign(offset, 0.0);
}

QNetwork::QNetwork(std::vector<int> layer_sizes, double dropout_rate,
                   Rng& init_rng)
    : QNetwork(std::move(layer_sizes), dropout_rate) {
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const double fan_in = layer_sizes_[l];
    // The linear head starts near zero so early regression toward small
    // Q-targets does not push the hidden ReLUs into the dead region.
    const double gain = l + 1 == num_layers() ? kOutputInitGain : 1.0;
    const double limit = gain * std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& w : weights(l)) w = dist(init_rng);
  }
}

QNetwork QNetwork::zeros(std::vector<int> layer_sizes, double dropout_rate) {
  return QNetwork(std::move(layer_sizes), dropout_rate);
}

std::span<double> QNetwork::weights(std::size_t l) {
  const auto n = static_cast<std::size_t>(layer_sizes_[l]) *
                 static_cast<std::size_t>(layer_sizes_[l + 1]);
  return {params_.data() + weight_offset_[l], n};
}

std::span<double> QNetwork::biases(std::size_t l) {
  return {params_.data() + bias_offset_[l],
          static_cast<std::size_t>(layer_sizes_[l + 1])};
}

std::span<const double> QNetwork::weights(std::size_t l) const {
  const auto n = static_cast<std::size_t>(layer_sizes_[l]) *
                 static_cast<std::size_t>(layer_sizes_[l + 1]);
  return {params_.data() + weight_offset_[l], n};
}

std::span<const double> QNetwork::biases(std::size_t l) const {
  return {params_.data() + bias_offset_[l],
          static_cast<std::size_t>(layer_sizes_[l + 1])};
}

void QNetwork::forward_impl(std::span<const double> input, ForwardCache* cache,
                            Rng* dropout_rng, std::span<double> out) const {
  for (double x : input) {
    if (!std::isfinite(x)) {
      throw UsageError("non-finite network input");
    }
  }
  const std::size_t layers = num_layers();
  const bool use_dropout = dropout_rng != nullptr && dropout_rate_ > 0.0;
  const double keep_scale = 1.0 / (1.0 - dropout_rate_);

  // Scratch reused across calls; the cache, when given, owns its buffers.
  thread_local std::vector<double> scratch_in;
  thread_local std::vector<double> scratch_out;
  if (cache != nullptr) {
    cache->activations.resize(layers + 1);
    cache->dropout_scale.resize(use_dropout ? layers - 1 : 0);
    cache->activations[0].assign(input.begin(), input.end());
  } else {
    scratch_in.assign(input.begin(), input.end());
  }

  for (std::size_t l = 0; l < layers; ++l) {
    const auto in = static_cast<std::size_t>(layer_sizes_[l]);
    const auto n_out = static_cast<std::size_t>(layer_sizes_[l + 1]);
    const double* w = params_.data() + weight_offset_[l];
    const double* b = params_.data() + bias_offset_[l];
    const std::vector<double>& current =
        cache != nullptr ? cache->activations[l] : scratch_in;
    std::vector<double>& next =
        cache != nullptr ? cache->activations[l + 1] : scratch_out;
    next.resize(n_out);
    for (std::size_t o = 0; o < n_out; ++o) {
      const double* row = w + o * in;
      double acc = b[o];
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * current[i];
      next[o] = acc;
    }
    const bool hidden = l + 1 < layers;
    if (hidden) {
      for (double& v : next) v = std::max(0.0, v);
      if (use_dropout) {
        std::vector<double>& scale = cache != nullptr
                                         ? cache->dropout_scale[l]
                                         : scratch_mask();
        scale.resize(n_out);
        for (std::size_t o = 0; o < n_out; ++o) {
          scale[o] = uniform01(*dropout_rng) < dropout_rate_ ? 0.0 : keep_scale;
          next[o] *= scale[o];
        }
      }
    }
    if (cache == nullptr) scratch_in.swap(scratch_out);
  }
  const std::vector<double>& result =
      cache != nullptr ? cache->activations[layers] : scratch_in;
  std::copy(result.begin(), result.end(), out.begin());
}

QValues QNetwork::q_values(const StateVector& s) const {
  QValues q{};
  forward_impl(s, nullptr, nullptr, q);
  return q;
}

QValues QNetwork::forward(const StateVector& s, ForwardCache& cache,
                          Rng* dropout_rng) const {
  QValues q{};
  forward_impl(s, &cache, dropout_rng, q);
  return q;
}

void QNetwork::backward(const ForwardCache& cache, int action, double target,
                        std::span<double> grad, double scale) const {
  const std::size_t layers = num_layers();
  if (grad.size() != params_.size()) {
    throw UsageError("gradient buffer has the wrong size");
  }
  if (cache.activations.size() != layers + 1) {
    throw UsageError("backward called without a matching forward pass");
  }
  if (action < 0 || action >= layer_sizes_.back()) {
    throw UsageError("action index out of range in backward");
  }
  const std::vector<double>& q = cache.activations.back();
  std::vector<double> delta(q.size(), 0.0);
  delta[static_cast<std::size_t>(action)] =
      -2.0 * scale * (target - q[static_cast<std::size_t>(action)]);

  const bool had_dropout = !cache.dropout_scale.empty();
  std::vector<double> prev_delta;
  for (std::size_t l = layers; l-- > 0;) {
    const auto in = static_cast<std::size_t>(layer_sizes_[l]);
    const auto n_out = static_cast<std::size_t>(layer_sizes_[l + 1]);
    const std::vector<double>& input = cache.activations[l];
    double* gw = grad.data() + weight_offset_[l];
    double* gb = grad.data() + bias_offset_[l];
    const double* w = params_.data() + weight_offset_[l];

    for (std::size_t o = 0; o < n_out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      gb[o] += d;
      double* grow = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) grow[i] += d * input[i];
    }
    if (l == 0) break;

    prev_delta.assign(in, 0.0);
    for (std::size_t o = 0; o < n_out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) prev_delta[i] += d * row[i];
    }
    // Through ReLU and the dropout mask of hidden layer l-1.
    for (std::size_t i = 0; i < in; ++i) {
      const double mask = had_dropout ? cache.dropout_scale[l - 1][i] : 1.0;
      prev_delta[i] = input[i] > 0.0 ? prev_delta[i] * mask : 0.0;
    }
    delta.swap(prev_delta);
  }
}

std::vector<double> QNetwork::gradients(const ForwardCache& cache, int action,
                                        double target) const {
  std::vector<double> grad(params_.size(), 0.0);
  backward(cache, action, target, grad);
  return grad;
}

LearningRateSchedule::LearningRateSchedule(
    std::vector<std::pair<std::uint64_t, double>> milestones)
    : milestones_(std::move(milestones)) {
  if (milestones_.empty()) {
    throw ConfigError("learning-rate schedule needs at least one milestone");
  }
  if (milestones_.front().first != 0) {
    throw ConfigError("learning-rate schedule must start at step 0");
  }
  for (std::size_t i = 0; i < milestones_.size(); ++i) {
    if (!(milestones_[i].second > 0.0)) {
      throw ConfigError("learning rates must be positive");
    }
    if (i > 0 && milestones_[i].first <= milestones_[i - 1].first) {
      throw ConfigError("learning-rate milestones must be strictly increasing");
    }
  }
}

double LearningRateSchedule::rate_at(std::uint64_t step) const {
  double rate = milestones_.front().second;
  for (const auto& [at, r] : milestones_) {
    if (at > step) break;
    rate = r;
  }
  return rate;
}

AdamOptimizer::AdamOptimizer(std::size_t num_parameters, AdamConfig cfg)
    : cfg_(std::move(cfg)),
      first_moment_(num_parameters, 0.0),
      second_moment_(num_parameters, 0.0) {}

void AdamOptimizer::step(QNetwork& net, std::span<const double> grad) {
  std::span<double> params = net.parameters();
  if (grad.size() != params.size() || params.size() != first_moment_.size()) {
    throw UsageError("optimizer, network and gradient shapes differ");
  }
  const double lr = cfg_.schedule.rate_at(step_count_);
  ++step_count_;
  const double t = static_cast<double>(step_count_);
  const double bias1 = 1.0 - std::pow(cfg_.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg_.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    first_moment_[i] = cfg_.beta1 * first_moment_[i] + (1.0 - cfg_.beta1) * g;
    second_moment_[i] =
        cfg_.beta2 * second_moment_[i] + (1.0 - cfg_.beta2) * g * g;
    const double m_hat = first_moment_[i] / bias1;
    const double v_hat = second_moment_[i] / bias2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
  }
}

void copy_parameters(const QNetwork& src, QNetwork& dst) {
  if (src.layer_sizes() != dst.layer_sizes()) {
    throw UsageError("copy_parameters: layer sizes differ");
  }
  std::span<const double> from = src.parameters();
  std::copy(from.begin(), from.end(), dst.parameters().begin());
}

void save_checkpoint(const QNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open checkpoint for writing: " + path.string());
  }
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(out, kFormatVersion);
  write_pod<std::uint32_t>(out,
                           static_cast<std::uint32_t>(net.layer_sizes().size()));
  for (int s : net.layer_sizes()) write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s));
  write_pod<double>(out, net.dropout_rate());
  write_pod<std::uint64_t>(out, net.num_parameters());
  for (double p : net.parameters()) write_pod<double>(out, p);
  if (!out) {
    throw IoError("failed writing checkpoint: " + path.string());
  }
}

QNetwork load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open checkpoint: " + path.string());
  }
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("not a Q-network checkpoint: " + path.string());
  }
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kFormatVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version) +
                  ": " + path.string());
  }
  const auto count = read_pod<std::uint32_t>(in, path);
  if (count < 2 || count > 64) {
    throw IoError("corrupt layer count in checkpoint: " + path.string());
  }
  std::vector<int> sizes(count);
  for (int& s : sizes) s = static_cast<int>(read_pod<std::uint32_t>(in, path));
  const auto dropout = read_pod<double>(in, path);
  QNetwork net = [&] {
    try {
      return QNetwork::zeros(sizes, dropout);
    } catch (const ConfigError& e) {
      throw IoError("corrupt network shape in checkpoint " + path.string() +
                    ": " + e.what());
    }
  }();
  const auto n = read_pod<std::uint64_t>(in, path);
  if (n != net.num_parameters()) {
    throw IoError("parameter count does not match layer sizes: " +
                  path.string());
  }
  for (double& p : net.parameters()) p = read_pod<double>(in, path);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError("trailing bytes after checkpoint payload: " + path.string());
  }
  return net;
}

}  // namespace sidelink::nn
