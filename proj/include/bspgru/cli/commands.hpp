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

#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bspgru/cli/config.hpp"

namespace bspgru {

/// --verify found sparse and dense-masked inference disagreeing.
class VerifyError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (dataset or bench CSV, summary JSON).
class InputFormatError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitMissingFile = 3,
  kExitCorrupt = 4,
  kExitInfeasible = 5,
  kExitDivergence = 6,
  kExitVerify = 7,
};

struct ErrorInfo {
  std::string code;  // machine-readable, e.g. "corrupt_file"
  int exit = kExitFailure;
  std::string message;
};

/// Maps an exception (unwrapping nested ones) to its exit code.
ErrorInfo classify(const std::exception& e);
/// error: code=<code> exit=<n> message="<escaped>"
std::string error_line(const ErrorInfo& info);

struct CommandContext {
  RunConfig config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> input;
  std::vector<std::filesystem::path> runs;  // report only
  bool verify = false;
};

/// Standard file names inside a run directory.
namespace files {
inline constexpr const char* kConfig = "config.json";
inline constexpr const char* kDataset = "dataset.csv";
inline constexpr const char* kModel = "model.grup";
inline constexpr const char* kTrainMetrics = "train_metrics.csv";
inline constexpr const char* kTrainSummary = "train_summary.json";
inline constexpr const char* kPruned = "pruned.grup";
inline constexpr const char* kMasks = "masks.bspm";
inline constexpr const char* kPruneReport = "prune_report.csv";
inline constexpr const char* kPruneSummary = "prune_summary.json";
inline constexpr const char* kBspcDir = "bspc";
inline constexpr const char* kRest = "rest.grup";
inline constexpr const char* kPredictions = "predictions.csv";
inline constexpr const char* kBench = "bench.csv";
inline constexpr const char* kTuneLog = "tune_log.csv";
inline constexpr const char* kTuneChoice = "tune_choice.json";
inline constexpr const char* kReportCsv = "report.csv";
inline constexpr const char* kReportTxt = "report.txt";
}  // namespace files

void cmd_gen(const CommandContext& ctx);
void cmd_train(const CommandContext& ctx);
void cmd_prune(const CommandContext& ctx);
void cmd_pack(const CommandContext& ctx);
void cmd_infer(const CommandContext& ctx);
void cmd_bench(const CommandContext& ctx);
void cmd_tune(const CommandContext& ctx);
void cmd_report(const CommandContext& ctx);

// Dataset CSV: seq,label,t,x0..x{I-1}; one line per (sequence, timestep).
std::string dataset_csv(const Dataset& data);
Dataset parse_dataset_csv(const std::string& text);

}  // namespace bspgru
