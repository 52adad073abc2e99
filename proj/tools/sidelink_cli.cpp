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

// Command-line front end. Everything goes through the C API.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sidelink/sidelink.h"

namespace {

// Exit codes by error category.
int exit_code(sl_status s) {
  switch (s) {
    case SL_OK: return 0;
    case SL_ERR_ARGUMENT: return 2;
    case SL_ERR_CONFIG: return 3;
    case SL_ERR_IO: return 4;
    case SL_ERR_USAGE: return 5;
    case SL_ERR_INTERNAL: return 70;
  }
  return 70;
}

struct CommonFlags {
  std::string config;
  std::int64_t seed = -1;
  std::string out;
  std::string dump_events;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "Experiment spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "Override the spec's seed(s)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out", f.out, "Override the spec's output_path");
  sub->add_option("--dump-events", f.dump_events,
                  "Write the raw per-epoch report log to this path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Licensed/unlicensed sidelink band scheduling simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sl_version()));

  struct Sub {
    const char* name;
    const char* help;
    sl_command command;
  };
  const std::vector<Sub> subs = {
      {"train", "Train a DDQN agent and write a checkpoint", SL_CMD_TRAIN},
      {"evaluate", "Evaluate policies at the configured licensed budget",
       SL_CMD_EVALUATE},
      {"sweep", "Evaluate policies across licensed budgets", SL_CMD_SWEEP},
      {"compare-channel",
       "Compare static- and dynamic-channel trained agents",
       SL_CMD_COMPARE_CHANNEL},
      {"validate-queue", "Check simulated M/M/1/K blocking against theory",
       SL_CMD_VALIDATE_QUEUE},
  };
  std::vector<CommonFlags> flags(subs.size());
  std::vector<CLI::App*> apps;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    CLI::App* sub = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(sub, flags[i]);
    apps.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(SL_ERR_ARGUMENT);
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!apps[i]->parsed()) continue;
    const CommonFlags& f = flags[i];
    sl_run_options opts{};
    opts.command = subs[i].command;
    opts.config_path = f.config.c_str();
    opts.has_seed = f.seed >= 0 ? 1 : 0;
    opts.seed = f.seed >= 0 ? static_cast<std::uint64_t>(f.seed) : 0;
    opts.out_path = f.out.empty() ? nullptr : f.out.c_str();
    opts.dump_events_path =
        f.dump_events.empty() ? nullptr : f.dump_events.c_str();

    std::vector<char> report(1 << 16);
    const sl_status s = sl_run(&opts, report.data(), report.size());
    if (s != SL_OK) {
      std::fprintf(stderr, "error [%s]: %s\n", sl_status_name(s),
                   sl_last_error());
      return exit_code(s);
    }
    std::fputs(report.data(), stdout);
    return 0;
  }
  return exit_code(SL_ERR_ARGUMENT);
}
