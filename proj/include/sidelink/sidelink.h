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

#ifndef SIDELINK_SIDELINK_H_
#define SIDELINK_SIDELINK_H_

/* C interface to the sidelink band-scheduling simulator and its learning
 * agent. All handles are opaque. Every fallible call returns an sl_status;
 * on failure sl_last_error() describes the problem until the next call on
 * the same thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SIDELINK_BUILDING_LIBRARY)
#define SIDELINK_API __declspec(dllexport)
#else
#define SIDELINK_API __declspec(dllimport)
#endif
#else
#define SIDELINK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define SL_STATE_DIM 7
#define SL_NUM_ACTIONS 5

typedef enum sl_status {
  SL_OK = 0,
  SL_ERR_ARGUMENT = 1, /* null pointer or out-of-range argument */
  SL_ERR_CONFIG = 2,   /* rejected configuration or experiment spec */
  SL_ERR_USAGE = 3,    /* call not valid in the object's current state */
  SL_ERR_IO = 4,       /* file could not be read or written */
  SL_ERR_INTERNAL = 5
} sl_status;

/* Action indices. */
enum {
  SL_ACTION_CC_28G = 0,
  SL_ACTION_CC_26G = 1,
  SL_ACTION_SLL_28G = 2,
  SL_ACTION_SLL_26G = 3,
  SL_ACTION_SLU_5G = 4
};

/* Outcome of the dispatch attempt in one epoch. */
typedef enum sl_outcome {
  SL_OUTCOME_SENT = 0,
  SL_OUTCOME_BLOCKED_NO_BANDWIDTH = 1,
  SL_OUTCOME_BLOCKED_LBT = 2,
  SL_OUTCOME_IDLE = 3
} sl_outcome;

typedef enum sl_command {
  SL_CMD_TRAIN = 0,
  SL_CMD_EVALUATE = 1,
  SL_CMD_SWEEP = 2,
  SL_CMD_COMPARE_CHANNEL = 3,
  SL_CMD_VALIDATE_QUEUE = 4
} sl_command;

typedef struct sl_env sl_env;
typedef struct sl_agent sl_agent;

typedef struct sl_step_result {
  double reward;
  double next_state[SL_STATE_DIM];
  int terminal;
  int outcome; /* sl_outcome */
  double rate_bps;
  uint32_t arrivals;
  uint32_t overflow; /* arrivals dropped on a full buffer */
} sl_step_result;

typedef struct sl_run_options {
  sl_command command;
  const char* config_path;
  int has_seed;
  uint64_t seed;
  const char* out_path;         /* NULL keeps the spec's output_path */
  const char* dump_events_path; /* NULL disables the event dump */
} sl_run_options;

SIDELINK_API const char* sl_version(void);
SIDELINK_API const char* sl_last_error(void);
SIDELINK_API const char* sl_status_name(sl_status status);

/* Environment. `config_json` is a JSON object with the "env" fields of an
 * experiment spec; NULL or "{}" selects the defaults. */
SIDELINK_API sl_status sl_env_create(const char* config_json, sl_env** out);
SIDELINK_API void sl_env_destroy(sl_env* env);
SIDELINK_API sl_status sl_env_reset(sl_env* env, double state[SL_STATE_DIM]);
SIDELINK_API sl_status sl_env_observe(const sl_env* env,
                                      double state[SL_STATE_DIM]);
SIDELINK_API sl_status sl_env_step(sl_env* env, int action,
                                   sl_step_result* out);

/* Frozen Q-network loaded from a checkpoint. */
SIDELINK_API sl_status sl_agent_load(const char* checkpoint_path,
                                     sl_agent** out);
SIDELINK_API void sl_agent_destroy(sl_agent* agent);
SIDELINK_API sl_status sl_agent_q_values(const sl_agent* agent,
                                         const double state[SL_STATE_DIM],
                                         double q[SL_NUM_ACTIONS]);
/* Greedy action; ties go to the lowest index. */
SIDELINK_API sl_status sl_agent_act(const sl_agent* agent,
                                    const double state[SL_STATE_DIM],
                                    int* action);

SIDELINK_API sl_status sl_threshold_policy(const double state[SL_STATE_DIM],
                                           double wifi_idle_pivot,
                                           double licensed_residual_pivot,
                                           int* action);

/* Runs one harness command. A short human-readable report is copied into
 * `report` (truncated, always NUL-terminated) when it is non-NULL. */
SIDELINK_API sl_status sl_run(const sl_run_options* options, char* report,
                              size_t report_size);

#ifdef __cplusplus
}
#endif

#endif /* SIDELINK_SIDELINK_H_ */
