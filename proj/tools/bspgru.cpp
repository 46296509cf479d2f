// Copyright 2026 The bspgru Authors
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

// bspgru: train, prune, pack, run and benchmark block-structured sparse GRUs.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bspgru/cli/commands.hpp"

namespace {

using namespace bspgru;

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string input;
  int reps = 0;
  int workers = 0;
  bool verify = false;
  std::vector<std::string> runs;
};

CommandContext make_context(const Flags& f, CLI::App& app) {
  CommandContext ctx;
  ctx.config = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (app.count("--seed")) ctx.config.seed = f.seed;
  if (!f.out.empty()) ctx.config.out = f.out;
  if (f.reps != 0) ctx.config.bench.reps = f.reps;
  if (f.workers != 0) ctx.config.bench.workers = f.workers;
  ctx.config.validate();
  ctx.out = ctx.config.out;
  if (!f.input.empty()) ctx.input = f.input;
  ctx.verify = f.verify;
  for (const auto& r : f.runs) ctx.runs.emplace_back(r);
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-structured pruning and sparse inference for GRUs"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "RunConfig JSON file");
  app.add_option("--seed", flags.seed, "top-level seed (overrides the config)");
  app.add_option("--out", flags.out, "run directory (overrides the config)");
  app.add_option("--reps", flags.reps, "benchmark repetitions (>= 5)");
  app.add_option("--workers", flags.workers, "executor worker threads");
  app.add_option("--input", flags.input, "input file or directory for the verb");
  app.add_flag("--verify", flags.verify, "infer: check against the dense-masked reference");

  struct Verb {
    const char* name;
    const char* help;
    void (*fn)(const CommandContext&);
  };
  const Verb verbs[] = {
      {"gen", "write a synthetic test dataset CSV", cmd_gen},
      {"train", "train the dense GRU", cmd_train},
      {"prune", "block-structured pruning of a checkpoint", cmd_prune},
      {"pack", "encode pruned weights as BSPC files", cmd_pack},
      {"infer", "run the BSPC model over a dataset CSV", cmd_infer},
      {"bench", "time dense and BSPC inference", cmd_bench},
      {"tune", "search block sizes and execution parameters", cmd_tune},
      {"report", "summarize run directories", cmd_report},
  };
  for (const Verb& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    sub->fallthrough();
    if (std::string(v.name) == "report") sub->add_option("runs", flags.runs, "run directories");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_line({"usage", kExitUsage, e.what()}) << "\n";
    return kExitUsage;
  }

  try {
    const CommandContext ctx = make_context(flags, app);
    std::filesystem::create_directories(ctx.out);
    for (const Verb& v : verbs) {
      if (app.got_subcommand(v.name)) v.fn(ctx);
    }
  } catch (const std::exception& e) {
    const ErrorInfo info = classify(e);
    std::cerr << error_line(info) << "\n";
    return info.exit;
  }
  return kExitOk;
}
