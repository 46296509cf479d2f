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

#include <gtest/gtest.h>

#include <cstdio>
#include <map>

#include "bspgru/tune/autotuner.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace bspgru {
namespace {

SearchSpace small_space() { return {{1, 2}, {1, 2, 4, 8}, {16, 64}, {1, 4}, {1, 2}}; }

Evaluator table(std::map<TuneConfig, Evaluation> values) {
  return [values = std::move(values)](const TuneConfig& c, std::uint64_t) { return values.at(c); };
}

TEST(Tune, SingletonSpace) {
  const SearchSpace s{{2}, {4}, {16}, {4}, {1}};
  const TuneResult r = tune(s, [](const TuneConfig&, std::uint64_t) { return Evaluation{100.0, 0.5}; }, 0.5, 1);
  EXPECT_EQ(r.chosen, (TuneConfig{2, 4, 16, 4, 1}));
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].score, 0.5);  // all times equal: normalized time is 0
  EXPECT_TRUE(r.records[0].chosen);
}

TEST(Tune, CandidatesAreSortedUniqueProduct) {
  SearchSpace s = small_space();
  s.num_c = {8, 2, 2, 4, 1};
  const auto c = s.candidates();
  EXPECT_EQ(c.size(), 2u * 4 * 2 * 2 * 2);
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
  EXPECT_EQ(std::adjacent_find(c.begin(), c.end()), c.end());
}

TEST(Tune, AnalyticSurfacePeaksAtFourColumnBlocks) {
  const SearchSpace s = small_space();
  std::map<TuneConfig, Evaluation> v;
  for (const auto& c : s.candidates()) {
    const double d = std::log2(static_cast<double>(c.num_c)) - 2.0;
    v[c] = {1000.0 + 10.0 * static_cast<double>(c.tile == 16) + 5.0 * static_cast<double>(c.workers),
            0.9 - 0.05 * d * d - 0.01 * static_cast<double>(c.num_r)};
  }
  int calls = 0;
  std::map<TuneConfig, int> seen;
  const TuneResult r = tune(s, [&](const TuneConfig& c, std::uint64_t seed) {
    ++calls;
    ++seen[c];
    EXPECT_EQ(seed, 77u);
    return v.at(c);
  }, 0.5, 77);
  EXPECT_EQ(r.chosen.num_c, 4);
  EXPECT_EQ(r.chosen, oracle::reverse_argmax(s.candidates(), v, 0.5));
  EXPECT_EQ(calls, static_cast<int>(s.candidates().size()));
  for (const auto& [c, n] : seen) EXPECT_EQ(n, 1);
  for (const auto& rec : r.records) EXPECT_LE(rec.score, r.records[0].score + 1.0);
  const auto chosen = std::find_if(r.records.begin(), r.records.end(), [](const TuneRecord& x) { return x.chosen; });
  ASSERT_NE(chosen, r.records.end());
  for (const auto& rec : r.records) EXPECT_LE(rec.score, chosen->score);
  EXPECT_EQ(std::count_if(r.records.begin(), r.records.end(), [](const TuneRecord& x) { return x.chosen; }), 1);
}

TEST(Tune, ZeroLambdaIgnoresTime) {
  const SearchSpace s = small_space();
  std::map<TuneConfig, Evaluation> v;
  Rng rng(3);
  for (const auto& c : s.candidates()) v[c] = {rng.uniform(1.0, 1e6), rng.uniform()};
  const TuneResult r = tune(s, table(v), 0.0, 1);
  for (const auto& rec : r.records) EXPECT_LE(rec.eval.accuracy_proxy, v.at(r.chosen).accuracy_proxy);
}

TEST(Tune, TiesGoToSmallestConfig) {
  const SearchSpace s = small_space();
  const TuneResult r = tune(s, [](const TuneConfig&, std::uint64_t) { return Evaluation{5.0, 0.7}; }, 0.5, 1);
  EXPECT_EQ(r.chosen, s.candidates().front());
  // a tie between two non-minimal configs
  std::map<TuneConfig, Evaluation> v;
  for (const auto& c : s.candidates()) v[c] = {10.0, 0.1};
  v[{2, 4, 64, 1, 1}] = {10.0, 0.9};
  v[{1, 8, 16, 4, 2}] = {10.0, 0.9};
  EXPECT_EQ(tune(s, table(v), 0.5, 1).chosen, (TuneConfig{1, 8, 16, 4, 2}));
}

TEST(Tune, RandomSurfacesMatchIndependentArgmax) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const SearchSpace s = small_space();
    std::map<TuneConfig, Evaluation> v;
    for (const auto& c : s.candidates())
      // coarse grid so ties actually happen
      v[c] = {static_cast<double>(1 + rng.below(5)) * 100.0, static_cast<double>(rng.below(4)) / 4.0};
    const double lambda = static_cast<double>(rng.below(3)) * 0.5;
    const TuneResult a = tune(s, table(v), lambda, 1);
    EXPECT_EQ(a.chosen, oracle::reverse_argmax(s.candidates(), v, lambda));
    const TuneResult b = tune(s, table(v), lambda, 1);
    EXPECT_EQ(tune_log_csv(a), tune_log_csv(b));
  }
}

TEST(Tune, EvaluatorFailureCarriesConfig) {
  const SearchSpace s = small_space();
  const TuneConfig bad{2, 4, 16, 1, 1};
  try {
    tune(s, [&](const TuneConfig& c, std::uint64_t) {
      if (c == bad) throw InfeasibleError("no room");
      return Evaluation{1.0, 1.0};
    }, 0.5, 1);
    FAIL();
  } catch (const TuneError& e) {
    EXPECT_EQ(e.config(), bad);
    EXPECT_NE(std::string(e.what()).find("num_r=2 num_c=4"), std::string::npos);
    EXPECT_THROW(std::rethrow_if_nested(e), InfeasibleError);
  }
  EXPECT_THROW(tune(s, [](const TuneConfig&, std::uint64_t) { return Evaluation{-1.0, 1.0}; }, 0.5, 1), TuneError);
}

TEST(Tune, SpaceValidation) {
  SearchSpace s = small_space();
  s.tile.clear();
  EXPECT_THROW(tune(s, table({}), 0.5, 1), InvariantError);
  s = small_space();
  s.unroll = {9};
  EXPECT_THROW(s.validate(), InvariantError);
  s = small_space();
  EXPECT_NO_THROW(s.validate({{32, 16}}));
  EXPECT_THROW(s.validate({{32, 6}}), InfeasibleError);  // 8 blocks do not fit 6 columns
  EXPECT_THROW(tune(small_space(), table({}), -0.5, 1), InvariantError);
}

TEST(Tune, LogCsv) {
  const SearchSpace s{{1}, {2}, {16}, {4}, {1, 2}};
  const TuneResult r = tune(s, [](const TuneConfig& c, std::uint64_t) {
    return Evaluation{c.workers == 1 ? 200.0 : 100.0, 0.75};
  }, 0.5, 1);
  EXPECT_EQ(tune_log_csv(r),
            "num_r,num_c,tile,unroll,workers,median_ns,accuracy_proxy,score,chosen\n"
            "1,2,16,4,1,200.0,0.750000,0.250000,0\n"
            "1,2,16,4,2,100.0,0.750000,0.750000,1\n");
}

// ---- accuracy proxy

class Proxy : public ::testing::Test {
 protected:
  SyntheticTask task = SyntheticTask::make(10, 8, 3, 0.5, 5);
  Dataset train_data = task.sample(128, "train");
  Dataset validation = task.sample(64, "validation");
  GruParamsd dense = [this] {
    TrainOptions o;
    o.epochs = 6;
    o.seed = 2;
    return train(init_gru_params(8, 16, 3, 1), train_data, o).params;
  }();
};

TEST_F(Proxy, UnitRatesWithoutBudgetIsDenseAccuracy) {
  EXPECT_EQ(accuracy_proxy(dense, {2, 2}, {1.0, 1.0}, 0, 9, train_data, validation), accuracy(dense, validation));
}

TEST_F(Proxy, UnitRatesIsDenseRetrainedForBudget) {
  const BspResult r = proxy_prune(dense, {2, 2}, {1.0, 1.0}, 2, 9, train_data, validation);
  EXPECT_EQ(r.report.compression_rate, 1.0);
  EXPECT_EQ(r.report.accuracy_after, accuracy(r.pruned, validation));
}

TEST_F(Proxy, Deterministic) {
  const double a = accuracy_proxy(dense, {2, 4}, {4.0, 2.0}, 1, 9, train_data, validation);
  const double b = accuracy_proxy(dense, {2, 4}, {4.0, 2.0}, 1, 9, train_data, validation);
  EXPECT_EQ(std::bit_cast<std::uint64_t>(a), std::bit_cast<std::uint64_t>(b));
}

TEST_F(Proxy, InfeasiblePropagates) {
  EXPECT_THROW(accuracy_proxy(dense, {64, 2}, {2.0, 1.0}, 1, 9, train_data, validation), InfeasibleError);
}

TEST(ProxyTrend, NonincreasingInColumnRateOnAverage) {
  // reference-sized model: I = 16, H = 32, C = 4, T = 20
  const SyntheticTask task = SyntheticTask::make(20, 16, 4, 0.5, derive_seed(42, "task"));
  const Dataset tr = task.sample(2000, "train"), val = task.sample(500, "validation");
  TrainOptions o;
  o.epochs = 30;
  o.seed = derive_seed(42, "train");
  const GruParamsd dense = train(init_gru_params(16, 32, 4, derive_seed(42, "model")), tr, o).params;
  // One column block per strip so each rate keeps a distinct column count
  // (with 4-wide blocks, rates 4 and 16 would both clamp to one column).
  const std::vector<double> col_rates{1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<double> mean(col_rates.size(), 0.0);
  const int seeds = 5;
  for (int s = 0; s < seeds; ++s)
    for (std::size_t k = 0; k < col_rates.size(); ++k)
      mean[k] += accuracy_proxy(dense, {4, 1}, {col_rates[k], 1.0}, 1, derive_seed(100 + s, "proxy"), tr, val) / seeds;
  for (std::size_t k = 0; k < mean.size(); ++k) std::printf("col_rate %g: mean proxy %.4f\n", col_rates[k], mean[k]);
  // Near saturation neighbouring means can differ by less than one
  // validation example; that much is treated as noise, not a trend.
  const double resolution = 1.0 / static_cast<double>(val.labels.size());
  for (std::size_t k = 1; k < mean.size(); ++k)
    EXPECT_LE(mean[k], mean[k - 1] + resolution) << "col_rate " << col_rates[k];
  EXPECT_LT(mean.back(), mean.front());
}

}  // namespace
}  // namespace bspgru
