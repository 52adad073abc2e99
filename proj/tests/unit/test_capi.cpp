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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "nn_core.hpp"
#include "sidelink/sidelink.h"

namespace fs = std::filesystem;

TEST_SUITE("capi") {

TEST_CASE("version and status names") {
  CHECK(std::string(sl_version()) == "1.0.0");
  CHECK(std::string(sl_status_name(SL_OK)) == "ok");
  CHECK(std::string(sl_status_name(SL_ERR_CONFIG)) == "config");
  CHECK(std::string(sl_status_name(SL_ERR_IO)) == "io");
}

TEST_CASE("environment lifecycle through handles") {
  sl_env* env = nullptr;
  REQUIRE(sl_env_create(R"({"arrival_rate": 0.5, "episode_length": 5})",
                        &env) == SL_OK);
  REQUIRE(env != nullptr);
  double state[SL_STATE_DIM];
  CHECK(sl_env_observe(env, state) == SL_ERR_USAGE);
  REQUIRE(sl_env_reset(env, state) == SL_OK);
  CHECK(state[0] == 0.0);
  sl_step_result r{};
  for (int t = 0; t < 5; ++t) {
    REQUIRE(sl_env_step(env, SL_ACTION_CC_28G, &r) == SL_OK);
    CHECK(r.outcome >= SL_OUTCOME_SENT);
    CHECK(r.outcome <= SL_OUTCOME_IDLE);
  }
  CHECK(r.terminal == 1);
  CHECK(sl_env_step(env, SL_ACTION_CC_28G, &r) == SL_ERR_USAGE);
  CHECK(std::strlen(sl_last_error()) > 0);
  sl_env_reset(env, state);
  CHECK(sl_env_step(env, 7, &r) == SL_ERR_ARGUMENT);
  CHECK(sl_env_step(env, 0, nullptr) == SL_ERR_ARGUMENT);
  sl_env_destroy(env);
  sl_env_destroy(nullptr);
}

TEST_CASE("bad environment configs are reported, not thrown") {
  sl_env* env = nullptr;
  CHECK(sl_env_create(R"({"queue_capacity": 0})", &env) == SL_ERR_CONFIG);
  CHECK(env == nullptr);
  CHECK(sl_env_create(R"({"bogus": 1})", &env) == SL_ERR_CONFIG);
  CHECK(std::string(sl_last_error()).find("bogus") != std::string::npos);
  CHECK(sl_env_create(nullptr, nullptr) == SL_ERR_ARGUMENT);
  CHECK(sl_env_create(nullptr, &env) == SL_OK);
  sl_env_destroy(env);
}

TEST_CASE("agent handle matches the in-process network") {
  const fs::path path = fs::temp_directory_path() / "sidelink_capi.ckpt";
  sidelink::Rng rng(1);
  sidelink::nn::QNetwork net({7, 6, 5}, 0.0, rng);
  sidelink::nn::save_checkpoint(net, path);

  sl_agent* agent = nullptr;
  REQUIRE(sl_agent_load(path.string().c_str(), &agent) == SL_OK);
  const double state[SL_STATE_DIM] = {0.1, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
  double q[SL_NUM_ACTIONS];
  REQUIRE(sl_agent_q_values(agent, state, q) == SL_OK);
  sidelink::StateVector s;
  for (int i = 0; i < SL_STATE_DIM; ++i) s[i] = state[i];
  const sidelink::QValues want = net.q_values(s);
  int best = 0;
  for (int i = 0; i < SL_NUM_ACTIONS; ++i) {
    CHECK(q[i] == want[i]);
    if (q[i] > q[best]) best = i;
  }
  int action = -1;
  REQUIRE(sl_agent_act(agent, state, &action) == SL_OK);
  CHECK(action == best);
  sl_agent_destroy(agent);
  fs::remove(path);

  CHECK(sl_agent_load("/nonexistent.ckpt", &agent) == SL_ERR_IO);
}

TEST_CASE("threshold policy through the C API") {
  const double state[SL_STATE_DIM] = {0.3, 0.9, 0.4, 0.2, 0.1, 1.0, 0.3};
  int action = -1;
  REQUIRE(sl_threshold_policy(state, 0.5, 0.5, &action) == SL_OK);
  CHECK(action == SL_ACTION_CC_28G);
  CHECK(sl_threshold_policy(state, 2.0, 0.5, &action) == SL_ERR_CONFIG);
}

TEST_CASE("sl_run maps harness failures to status codes") {
  char report[256];
  sl_run_options opts{};
  opts.command = SL_CMD_EVALUATE;
  opts.config_path = "/nonexistent/spec.json";
  CHECK(sl_run(&opts, report, sizeof report) == SL_ERR_IO);
  CHECK(report[0] == '\0');
  CHECK(sl_run(nullptr, report, sizeof report) == SL_ERR_ARGUMENT);

  const fs::path dir = fs::temp_directory_path() / "sidelink_capi_run";
  fs::create_directories(dir);
  const fs::path cfg = dir / "spec.json";
  {
    std::ofstream out(cfg);
    out << R"({"mode": "validate-queue",
              "queue_validation": {"rhos": [0.5], "capacities": [5],
                                   "arrivals": 2000}})";
  }
  opts.config_path = cfg.c_str();
  CHECK(sl_run(&opts, report, sizeof report) == SL_ERR_CONFIG);

  opts.command = SL_CMD_VALIDATE_QUEUE;
  const std::string out = (dir / "q.csv").string();
  opts.out_path = out.c_str();
  REQUIRE(sl_run(&opts, report, sizeof report) == SL_OK);
  CHECK(std::string(report).find("rho 0.5") != std::string::npos);
  CHECK(fs::exists(out));

  // Truncated, still terminated.
  char tiny[4];
  REQUIRE(sl_run(&opts, tiny, sizeof tiny) == SL_OK);
  CHECK(std::strlen(tiny) == 3);
  fs::remove_all(dir);
}

}  // TEST_SUITE
