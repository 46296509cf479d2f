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

#include "bspgru/tune/autotuner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <fmt/format.h>

namespace bspgru {

std::string TuneConfig::str() const {
  return fmt::format("num_r={} num_c={} tile={} unroll={} workers={}", num_r, num_c, tile, unroll,
                     workers);
}

void SearchSpace::validate(const std::vector<std::pair<Index, Index>>& shapes) const {
  require(!num_r.empty() && !num_c.empty() && !tile.empty() && !unroll.empty() && !workers.empty(),
          "SearchSpace: every candidate list must be nonempty");
  for (Index v : num_r) require(v >= 1, "SearchSpace: num_r must be >= 1");
  for (Index v : num_c) require(v >= 1, "SearchSpace: num_c must be >= 1");
  for (Index v : tile) require(v >= 1, "SearchSpace: tile must be >= 1");
  for (Index v : unroll) require(v >= 1 && v <= 8, "SearchSpace: unroll must be in [1, 8]");
  for (int v : workers) require(v >= 1, "SearchSpace: workers must be >= 1");
  for (auto [rows, cols] : shapes) {
    for (Index r : num_r) {
      for (Index c : num_c) {
        if (!BlockPartition{r, c}.fits(rows, cols)) {
          throw InfeasibleError(fmt::format("SearchSpace: partition {}x{} does not fit a {}x{} matrix",
                                            r, c, rows, cols));
        }
      }
    }
  }
}

std::vector<TuneConfig> SearchSpace::candidates() const {
  auto uniq = [](auto v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  std::vector<TuneConfig> out;
  for (Index r : uniq(num_r))
    for (Index c : uniq(num_c))
      for (Index t : uniq(tile))
        for (Index u : uniq(unroll))
          for (int w : uniq(workers)) out.push_back({r, c, t, u, w});
  return out;
}

TuneResult tune(const SearchSpace& space, const Evaluator& evaluator, double lambda,
                std::uint64_t seed) {
  require(std::isfinite(lambda) && lambda >= 0.0, "tune: lambda must be a finite nonnegative number");
  space.validate();
  TuneResult result;
  result.lambda = lambda;
  for (const TuneConfig& cfg : space.candidates()) {
    Evaluation e;
    try {
      e = evaluator(cfg, seed);
    } catch (const std::exception& ex) {
      std::throw_with_nested(
          TuneError(fmt::format("tune: evaluation failed for {}: {}", cfg.str(), ex.what()), cfg));
    }
    if (!std::isfinite(e.median_ns) || e.median_ns < 0.0 || !std::isfinite(e.accuracy_proxy)) {
      throw TuneError(fmt::format("tune: evaluation for {} returned a non-finite or negative value",
                                  cfg.str()),
                      cfg);
    }
    result.records.push_back({cfg, e, 0.0, false});
  }

  double tmin = result.records.front().eval.median_ns, tmax = tmin;
  for (const auto& r : result.records) {
    tmin = std::min(tmin, r.eval.median_ns);
    tmax = std::max(tmax, r.eval.median_ns);
  }
  std::size_t best = 0;
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    auto& r = result.records[k];
    const double t = tmax > tmin ? (r.eval.median_ns - tmin) / (tmax - tmin) : 0.0;
    r.score = r.eval.accuracy_proxy - lambda * t;
    // candidates are in lexicographic order, so strict > keeps the smallest on ties
    if (r.score > result.records[best].score) best = k;
  }
  result.records[best].chosen = true;
  result.chosen = result.records[best].config;
  return result;
}

BspResult proxy_prune(const GruParamsd& dense, const BlockPartition& partition,
                      const PruneRates& rates, int budget_epochs, std::uint64_t seed,
                      const Dataset& train_data, const Dataset& validation_data) {
  require(budget_epochs >= 0, "accuracy_proxy: budget_epochs must be >= 0");
  BspConfig cfg;
  cfg.admm_epochs = budget_epochs;
  cfg.retrain_epochs = budget_epochs;
  cfg.seed = seed;
  return bsp_prune(dense, uniform_partitions(partition), rates, cfg, train_data, validation_data);
}

double accuracy_proxy(const GruParamsd& dense, const BlockPartition& partition,
                      const PruneRates& rates, int budget_epochs, std::uint64_t seed,
                      const Dataset& train_data, const Dataset& validation_data) {
  return proxy_prune(dense, partition, rates, budget_epochs, seed, train_data, validation_data)
      .report.accuracy_after;
}

std::string tune_log_csv(const TuneResult& result) {
  std::string out = "num_r,num_c,tile,unroll,workers,median_ns,accuracy_proxy,score,chosen\n";
  for (const auto& r : result.records) {
    out += fmt::format("{},{},{},{},{},{:.1f},{:.6f},{:.6f},{}\n", r.config.num_r, r.config.num_c,
                       r.config.tile, r.config.unroll, r.config.workers, r.eval.median_ns,
                       r.eval.accuracy_proxy, r.score, r.chosen ? 1 : 0);
  }
  return out;
}

}  // namespace bspgru
