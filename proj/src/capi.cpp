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

#include "sidelink/sidelink.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "baseline_policies.hpp"
#include "ddqn_agent.hpp"
#include "env.hpp"
#include "harness/experiment_spec.hpp"
#include "harness/runner.hpp"
#include "nn_core.hpp"

struct sl_env {
  explicit sl_env(sidelink::env::EnvConfig cfg) : impl(std::move(cfg)) {}
  sidelink::env::SidelinkEnv impl;
};

struct sl_agent {
  explicit sl_agent(sidelink::nn::QNetwork n) : net(std::move(n)) {}
  sidelink::nn::QNetwork net;
};

namespace {

thread_local std::string g_last_error;

sl_status fail(sl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the core's exception categories onto status codes.
template <typename F>
sl_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const sidelink::ConfigError& e) {
    return fail(SL_ERR_CONFIG, e.what());
  } catch (const sidelink::UsageError& e) {
    return fail(SL_ERR_USAGE, e.what());
  } catch (const sidelink::IoError& e) {
    return fail(SL_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SL_ERR_INTERNAL, "unknown failure");
  }
}

sidelink::StateVector to_state(const double* s) {
  sidelink::StateVector v{};
  std::copy(s, s + sidelink::kStateDim, v.begin());
  return v;
}

void from_state(const sidelink::StateVector& v, double* out) {
  std::copy(v.begin(), v.end(), out);
}

int outcome_code(sidelink::env::Outcome o) {
  switch (o) {
    case sidelink::env::Outcome::kSent: return SL_OUTCOME_SENT;
    case sidelink::env::Outcome::kBlockedNoBandwidth:
      return SL_OUTCOME_BLOCKED_NO_BANDWIDTH;
    case sidelink::env::Outcome::kBlockedLbt: return SL_OUTCOME_BLOCKED_LBT;
    case sidelink::env::Outcome::kIdle: return SL_OUTCOME_IDLE;
  }
  return SL_OUTCOME_IDLE;
}

}  // namespace

extern "C" {

const char* sl_version(void) { return "1.0.0"; }

const char* sl_last_error(void) { return g_last_error.c_str(); }

const char* sl_status_name(sl_status status) {
  switch (status) {
    case SL_OK: return "ok";
    case SL_ERR_ARGUMENT: return "argument";
    case SL_ERR_CONFIG: return "config";
    case SL_ERR_USAGE: return "usage";
    case SL_ERR_IO: return "io";
    case SL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

sl_status sl_env_create(const char* config_json, sl_env** out) {
  if (out == nullptr) return fail(SL_ERR_ARGUMENT, "out is null");
  *out = nullptr;
  return guarded([&] {
    const sidelink::env::EnvConfig cfg =
        sidelink::harness::parse_env_config(config_json ? config_json : "{}");
    *out = new sl_env(cfg);
    return SL_OK;
  });
}

void sl_env_destroy(sl_env* env) { delete env; }

sl_status sl_env_reset(sl_env* env, double state[SL_STATE_DIM]) {
  if (env == nullptr || state == nullptr) {
    return fail(SL_ERR_ARGUMENT, "env and state must be non-null");
  }
  return guarded([&] {
    from_state(env->impl.reset(), state);
    return SL_OK;
  });
}

sl_status sl_env_observe(const sl_env* env, double state[SL_STATE_DIM]) {
  if (env == nullptr || state == nullptr) {
    return fail(SL_ERR_ARGUMENT, "env and state must be non-null");
  }
  return guarded([&] {
    from_state(env->impl.observe(), state);
    return SL_OK;
  });
}

sl_status sl_env_step(sl_env* env, int action, sl_step_result* out) {
  if (env == nullptr || out == nullptr) {
    return fail(SL_ERR_ARGUMENT, "env and out must be non-null");
  }
  if (action < 0 || action >= SL_NUM_ACTIONS) {
    return fail(SL_ERR_ARGUMENT,
                "action index out of range: " + std::to_string(action));
  }
  return guarded([&] {
    const sidelink::env::StepResult r = env->impl.step(action);
    out->reward = r.reward;
    from_state(r.next_state, out->next_state);
    out->terminal = r.terminal ? 1 : 0;
    out->outcome = outcome_code(r.report.outcome);
    out->rate_bps = r.report.rate_bps;
    out->arrivals = r.report.arrivals;
    out->overflow = r.report.overflow;
    return SL_OK;
  });
}

sl_status sl_agent_load(const char* checkpoint_path, sl_agent** out) {
  if (checkpoint_path == nullptr || out == nullptr) {
    return fail(SL_ERR_ARGUMENT, "checkpoint_path and out must be non-null");
  }
  *out = nullptr;
  return guarded([&] {
    *out = new sl_agent(sidelink::nn::load_checkpoint(checkpoint_path));
    return SL_OK;
  });
}

void sl_agent_destroy(sl_agent* agent) { delete agent; }

sl_status sl_agent_q_values(const sl_agent* agent,
                            const double state[SL_STATE_DIM],
                            double q[SL_NUM_ACTIONS]) {
  if (agent == nullptr || state == nullptr || q == nullptr) {
    return fail(SL_ERR_ARGUMENT, "agent, state and q must be non-null");
  }
  return guarded([&] {
    const sidelink::QValues values = agent->net.q_values(to_state(state));
    std::copy(values.begin(), values.end(), q);
    return SL_OK;
  });
}

sl_status sl_agent_act(const sl_agent* agent, const double state[SL_STATE_DIM],
                       int* action) {
  if (agent == nullptr || state == nullptr || action == nullptr) {
    return fail(SL_ERR_ARGUMENT, "agent, state and action must be non-null");
  }
  return guarded([&] {
    *action =
        sidelink::ddqn::greedy_action(agent->net.q_values(to_state(state)));
    return SL_OK;
  });
}

sl_status sl_threshold_policy(const double state[SL_STATE_DIM],
                              double wifi_idle_pivot,
                              double licensed_residual_pivot, int* action) {
  if (state == nullptr || action == nullptr) {
    return fail(SL_ERR_ARGUMENT, "state and action must be non-null");
  }
  return guarded([&] {
    sidelink::baselines::ThresholdConfig cfg;
    cfg.wifi_idle_pivot = wifi_idle_pivot;
    cfg.licensed_residual_pivot = licensed_residual_pivot;
    cfg.validate();
    *action = sidelink::env::index_of(
        sidelink::baselines::threshold_policy(to_state(state), cfg));
    return SL_OK;
  });
}

sl_status sl_run(const sl_run_options* options, char* report,
                 size_t report_size) {
  if (report != nullptr && report_size > 0) report[0] = '\0';
  if (options == nullptr || options->config_path == nullptr) {
    return fail(SL_ERR_ARGUMENT, "options and config_path must be non-null");
  }
  using sidelink::harness::Mode;
  sidelink::harness::RunRequest request;
  switch (options->command) {
    case SL_CMD_TRAIN: request.mode = Mode::kTrain; break;
    case SL_CMD_EVALUATE: request.mode = Mode::kEvaluate; break;
    case SL_CMD_SWEEP: request.mode = Mode::kSweep; break;
    case SL_CMD_COMPARE_CHANNEL: request.mode = Mode::kCompareChannel; break;
    case SL_CMD_VALIDATE_QUEUE: request.mode = Mode::kValidateQueue; break;
    default:
      return fail(SL_ERR_ARGUMENT, "unknown command " +
                                       std::to_string(static_cast<int>(
                                           options->command)));
  }
  request.config_path = options->config_path;
  if (options->has_seed) request.seed = options->seed;
  if (options->out_path != nullptr) request.out = options->out_path;
  if (options->dump_events_path != nullptr) {
    request.dump_events = options->dump_events_path;
  }
  return guarded([&] {
    const std::string text = sidelink::harness::execute(request);
    if (report != nullptr && report_size > 0) {
      const std::size_t n = std::min(text.size(), report_size - 1);
      std::memcpy(report, text.data(), n);
      report[n] = '\0';
    }
    return SL_OK;
  });
}

}  // extern "C"
