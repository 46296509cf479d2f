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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bspgru/kernel/schedule.hpp"
#include "bspgru/prune/bsp_prune.hpp"
#include "bspgru/tensor/synthetic_task.hpp"
#include "bspgru/tensor/train.hpp"
#include "bspgru/tune/autotuner.hpp"

namespace bspgru {

inline constexpr int kConfigSchemaVersion = 1;

/// Malformed config: bad JSON, unknown key, wrong type, invalid value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct TaskConfig {
  Index seq_len = 20;
  Index input_dim = 16;
  Index num_classes = 4;
  double noise_std = 0.5;
  std::size_t train_size = 2000;
  std::size_t test_size = 500;
  bool operator==(const TaskConfig&) const = default;
};

struct TrainConfig {
  Index hidden_dim = 32;
  int epochs = 30;
  double lr = 0.01;
  int batch = 16;
  double clip_norm = 5.0;
  bool operator==(const TrainConfig&) const = default;
};

struct PruneConfig {
  double col_rate = 4.0;
  double row_rate = 2.0;
  Index num_r = 4;
  Index num_c = 4;
  double rho = 1e-2;
  int admm_epochs = 8;
  int retrain_epochs = 8;
  bool operator==(const PruneConfig&) const = default;
};

struct BenchConfig {
  int reps = 21;
  int warmup = 3;
  Index tile = 64;
  Index unroll = 4;
  int workers = 1;
  bool operator==(const BenchConfig&) const = default;
};

struct TunerConfig {
  std::vector<Index> num_r{2, 4};
  std::vector<Index> num_c{2, 4, 8};
  std::vector<Index> tile{16, 64};
  std::vector<Index> unroll{1, 4};
  std::vector<int> workers{1};
  double lambda = kDefaultLambda;
  int budget_epochs = 2;
  bool operator==(const TunerConfig&) const = default;
};

/// Everything a run needs; a run is reproducible from this plus the seed.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  std::uint64_t seed = 42;
  std::string out = "run";
  TaskConfig task;
  TrainConfig train;
  PruneConfig prune;
  BenchConfig bench;
  TunerConfig tune;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  bool operator==(const RunConfig&) const = default;

  SyntheticTask make_task() const;
  TrainOptions train_options() const;
  BspConfig bsp_config() const;
  ExecOptions exec_options() const;
  SearchSpace search_space() const;
};

/// Strict parse: missing keys take defaults, unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);
/// Canonical JSON (every key present, sorted).
std::string emit_config(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace bspgru
