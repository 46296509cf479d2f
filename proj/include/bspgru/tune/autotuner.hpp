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

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bspgru/prune/bsp_prune.hpp"

namespace bspgru {

struct TuneConfig {
  Index num_r = 1;
  Index num_c = 1;
  Index tile = 64;
  Index unroll = 4;
  int workers = 1;

  auto operator<=>(const TuneConfig&) const = default;
  std::string str() const;
};

struct SearchSpace {
  std::vector<Index> num_r;
  std::vector<Index> num_c;
  std::vector<Index> tile;
  std::vector<Index> unroll;
  std::vector<int> workers;

  /// Throws InvariantError on an empty list or out-of-range value, and
  /// InfeasibleError when a (num_r, num_c) does not fit one of `shapes`.
  void validate(const std::vector<std::pair<Index, Index>>& shapes = {}) const;
  /// Cartesian product of the deduplicated lists in lexicographic order.
  std::vector<TuneConfig> candidates() const;
};

struct Evaluation {
  double median_ns = 0.0;
  double accuracy_proxy = 0.0;
};

using Evaluator = std::function<Evaluation(const TuneConfig&, std::uint64_t seed)>;

struct TuneRecord {
  TuneConfig config;
  Evaluation eval;
  double score = 0.0;
  bool chosen = false;
};

struct TuneResult {
  TuneConfig chosen;
  std::vector<TuneRecord> records;  // candidate order
  double lambda = 0.5;
};

/// Evaluator failure, with the configuration that was being evaluated. The
/// original exception is nested (std::rethrow_if_nested recovers it).
class TuneError : public Error {
 public:
  TuneError(const std::string& what, TuneConfig config) : Error(what), config_(config) {}
  const TuneConfig& config() const { return config_; }

 private:
  TuneConfig config_;
};

inline constexpr double kDefaultLambda = 0.5;

/// Exhaustive search. score = accuracy_proxy - lambda * t, with t the
/// median time min-max normalized over the space (0 when all are equal).
/// Ties go to the lexicographically smallest configuration.
TuneResult tune(const SearchSpace& space, const Evaluator& evaluator, double lambda,
                std::uint64_t seed);

/// The bsp_prune run behind accuracy_proxy.
BspResult proxy_prune(const GruParamsd& dense, const BlockPartition& partition,
                      const PruneRates& rates, int budget_epochs, std::uint64_t seed,
                      const Dataset& train_data, const Dataset& validation_data);

/// Validation accuracy after bsp_prune with a short fixed budget (used for
/// both ADMM steps and retraining). With rates (1, 1) nothing is pruned and
/// this is the accuracy of the dense model retrained for the same budget.
double accuracy_proxy(const GruParamsd& dense, const BlockPartition& partition,
                      const PruneRates& rates, int budget_epochs, std::uint64_t seed,
                      const Dataset& train_data, const Dataset& validation_data);

/// num_r,num_c,tile,unroll,workers,median_ns,accuracy_proxy,score,chosen
std::string tune_log_csv(const TuneResult& result);

}  // namespace bspgru
