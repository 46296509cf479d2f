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

#include <algorithm>
#include <cmath>
#include <limits>

#include "bspgru/prune/admm.hpp"
#include "bspgru/prune/bsp_prune.hpp"
#include "bspgru/prune/mask_io.hpp"
#include "bspgru/prune/projection.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace bspgru {
namespace {

using testing::random_matrix;

TEST(Partition, GeometryAndRemainders) {
  const BlockPartition p{3, 2};
  EXPECT_EQ(p.strip_height(10), 4);
  EXPECT_EQ(p.strip(2, 10).begin, 8);
  EXPECT_EQ(p.strip(2, 10).end, 10);
  EXPECT_EQ(p.block_width(7), 4);
  EXPECT_EQ(p.block(1, 7).size(), 3);
  EXPECT_TRUE(p.fits(10, 7));
  // ceil(4/3) = 2 leaves the third strip empty
  EXPECT_FALSE((BlockPartition{3, 1}.fits(4, 4)));
  EXPECT_THROW((BlockPartition{3, 1}.validate(4, 4)), InfeasibleError);
  EXPECT_THROW((BlockPartition{0, 1}.validate(4, 4)), InvariantError);
  // every cell in exactly one block
  for (Index i = 0; i < 10; ++i) EXPECT_TRUE(p.strip(p.strip_of(i, 10), 10).contains(i));
}

TEST(Partition, KeepCountsAreCeilClamped) {
  EXPECT_EQ(keep_count(10, 1.0), 10);
  EXPECT_EQ(keep_count(10, 3.0), 4);
  EXPECT_EQ(keep_count(100, 1.25), 80);
  EXPECT_EQ(keep_count(220, 10.0), 22);
  EXPECT_EQ(keep_count(3, 100.0), 1);
  EXPECT_THROW(keep_count(3, 0.5), InfeasibleError);
  const SparsityConstraint c = constraint_from_rates(10, 7, {2, 2}, 2.0, 3.0);
  EXPECT_EQ(c.col_keep, (std::vector<Index>{2, 2}));
  EXPECT_EQ(c.row_keep, 4);
}

TEST(Projection, SpecColumnExample) {
  MatrixXd w = MatrixXd::Zero(4, 4);
  w(0, 0) = 3.0;
  w(1, 1) = 1.0;
  w(2, 2) = 4.0;
  w(3, 3) = 2.0;
  const MatrixXd z = project_block_columns(w, {1, 1}, 2);
  EXPECT_EQ(z(0, 0), 3.0);
  EXPECT_EQ(z(2, 2), 4.0);
  EXPECT_EQ(z.col(1).squaredNorm() + z.col(3).squaredNorm(), 0.0);
}

TEST(Projection, SpecRowExample) {
  MatrixXd w(3, 2);
  w << 3, 4, 1, 0, 0, 3;
  const MatrixXd z = project_rows(w, 2);
  EXPECT_EQ(z.row(0), w.row(0));
  EXPECT_EQ(z.row(2), w.row(2));
  EXPECT_TRUE(z.row(1).isZero(0.0));
}

TEST(Projection, FullKeepIsIdentity) {
  Rng rng(1);
  const MatrixXd w = random_matrix(rng, 5, 8);
  EXPECT_EQ(project_block_columns(w, {2, 2}, 4), w);
  EXPECT_EQ(project_rows(w, 5), w);
}

TEST(Projection, InfeasibleKeepThrows) {
  Rng rng(1);
  const MatrixXd w = random_matrix(rng, 5, 7);
  EXPECT_THROW(project_block_columns(w, {1, 2}, 5), InfeasibleError);
  EXPECT_THROW(project_rows(w, 6), InfeasibleError);
}

TEST(Projection, TiesGoToLowerIndex) {
  const MatrixXd w = MatrixXd::Ones(2, 4);
  const MatrixXd z = project_block_columns(w, {1, 1}, 2);
  EXPECT_EQ(z.col(0).sum() + z.col(1).sum(), 4.0);
  EXPECT_EQ(select_rows(MatrixXd::Ones(4, 2), 2), (std::vector<Index>{0, 1}));
}

TEST(Projection, MatchesBruteForce6x8) {
  Rng rng(68);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXd w = random_matrix(rng, 6, 8);
    const MatrixXd z = project_block_columns(w, {2, 2}, 2);
    EXPECT_TRUE(oracle::kept_verbatim_or_zero(w, z));
    EXPECT_NEAR((w - z).squaredNorm(), oracle::block_columns_sq(w, {2, 2}, 2), 1e-12);
  }
}

TEST(Projection, RowsMatchBruteForce5x4) {
  Rng rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXd w = random_matrix(rng, 5, 4);
    const MatrixXd z = project_rows(w, 2);
    EXPECT_TRUE(oracle::kept_verbatim_or_zero(w, z));
    EXPECT_NEAR((w - z).squaredNorm(), oracle::rows_sq(w, 2), 1e-12);
  }
}

TEST(Projection, SelectionIsScaleInvariant) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const MatrixXd w = random_matrix(rng, 6, 9);
    const BlockPartition part{2, 3};
    const std::vector<Index> keep{2, 1, 2};
    const double scale = std::exp(4.0 * rng.normal());
    EXPECT_EQ(select_block_columns(w, part, keep).kept_cols,
              select_block_columns(MatrixXd(scale * w), part, keep).kept_cols);
    EXPECT_EQ(select_rows(w, 3), select_rows(MatrixXd(scale * w), 3));
  }
}

// ---- masks

TEST(Mask, GridIsRowsTimesBlockColumns) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = testing::random_bsp(rng, 9, 9);
    const BoolMatrix g = r.mask.grid();
    const auto& kept = r.mask.kept_rows();
    for (Index i = 0; i < g.rows(); ++i) {
      const bool row_kept = std::binary_search(kept.begin(), kept.end(), i);
      const Index s = r.mask.partition().strip_of(i, g.rows());
      for (Index j = 0; j < g.cols(); ++j) {
        const auto& cols = r.mask.block_cols(s, r.mask.partition().block_of(j, g.cols()));
        EXPECT_EQ(g(i, j), row_kept && std::binary_search(cols.begin(), cols.end(), j));
      }
    }
    const auto back = StructuredMask::from_grid(g, r.mask.partition());
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->grid(), g);
    EXPECT_TRUE(is_bsp_feasible(g, r.mask.partition()));
  }
}

TEST(Mask, RejectsUnstructuredGrid) {
  BoolMatrix g = BoolMatrix::Constant(2, 2, false);
  g(0, 0) = true;
  g(1, 1) = true;  // rows 0 and 1 kept but they keep different columns
  EXPECT_FALSE(StructuredMask::from_grid(g, {1, 1}).has_value());
  EXPECT_TRUE(StructuredMask::from_grid(g, {2, 1}).has_value());
  EXPECT_THROW(StructuredMask(2, 2, {1, 1}, {1, 0}, {{0}}), InvariantError);  // unsorted rows
  EXPECT_THROW(StructuredMask(2, 2, {1, 1}, {0}, {{2}}), InvariantError);     // column out of block
}

TEST(MaskIo, RoundTripAndDamage) {
  Rng rng(12);
  WeightMasks masks;
  for (auto& m : masks) {
    const Index rows = 3 + static_cast<Index>(rng.below(5)), cols = 3 + static_cast<Index>(rng.below(5));
    m = testing::random_mask(rng, rows, cols, testing::random_partition(rng, rows, cols));
  }
  const Bytes b = encode_masks(masks);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "BSPM");
  const WeightMasks back = decode_masks(b);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_TRUE(back[k].same_support(masks[k]));
    EXPECT_EQ(back[k].kept_rows(), masks[k].kept_rows());
    EXPECT_EQ(back[k].all_block_cols(), masks[k].all_block_cols());
  }
  for (std::size_t n = 0; n < b.size(); ++n) EXPECT_THROW(decode_masks(std::span(b.data(), n)), ParseError);
}

// ---- ADMM

TEST(Admm, DualUpdateIsClosedForm) {
  Rng rng(2);
  AdmmState s;
  s.w = random_matrix(rng, 3, 4);
  s.z = random_matrix(rng, 3, 4);
  s.u = random_matrix(rng, 3, 4);
  const MatrixXd expected = (s.u + s.w) - s.z;
  admm_dual_update(s);
  EXPECT_TRUE((s.u.array() == expected.array()).all());
}

TEST(Admm, ZeroLossFirstStepIsProjection) {
  Rng rng(3);
  const MatrixXd w0 = random_matrix(rng, 4, 4);
  const Projection proj = [](const MatrixXd& m) { return project_block_columns(m, {2, 2}, 1); };
  AdmmState s;
  s.w = w0;
  s.z = w0;  // with f = 0, U = 0 and Z = W the W-update has zero gradient
  s.u = MatrixXd::Zero(4, 4);
  s.rho = 1.0;
  const AdmmState next = admm_step(s, proj, [](const MatrixXd& w) { return MatrixXd::Zero(w.rows(), w.cols()); });
  EXPECT_EQ(next.w, w0);
  EXPECT_EQ(next.z, proj(w0));
  EXPECT_TRUE((next.u.array() == (w0 - next.z).array()).all());
}

TEST(Admm, QuadraticToyConverges) {
  Rng rng(77);
  const MatrixXd target = random_matrix(rng, 4, 4);
  const BlockPartition part{2, 2};
  const Projection proj = [&](const MatrixXd& m) { return project_block_columns(m, part, 1); };
  AdmmState s = AdmmState::start(MatrixXd::Zero(4, 4), 1.0, proj);
  const LossGradient grad = [&](const MatrixXd& w) { return MatrixXd(w - target); };
  WUpdateOptions opt;
  opt.lr = 0.2;
  opt.steps = 5;
  int it = 0;
  for (; it < 200 && !(it > 0 && primal_residual(s) < 1e-3); ++it) {
    const MatrixXd u_old = s.u;
    s = admm_step(std::move(s), proj, grad, opt);
    EXPECT_TRUE((s.u.array() == ((u_old + s.w) - s.z).array()).all());
  }
  EXPECT_LT(primal_residual(s), 1e-3) << "after " << it << " steps";
}

TEST(Admm, NonFiniteDiverges) {
  AdmmState s = AdmmState::start(MatrixXd::Ones(2, 2), 1.0, [](const MatrixXd& m) { return m; });
  const LossGradient nan_grad = [](const MatrixXd& w) {
    return MatrixXd::Constant(w.rows(), w.cols(), std::numeric_limits<double>::quiet_NaN());
  };
  EXPECT_THROW(admm_step(s, [](const MatrixXd& m) { return m; }, nan_grad), DivergenceError);
}

// ---- BSP

class BspTest : public ::testing::Test {
 protected:
  SyntheticTask task = SyntheticTask::make(6, 8, 3, 0.3, 21);
  Dataset train_data = task.sample(96, "train");
  Dataset test_data = task.sample(48, "test");
  GruParamsd params = init_gru_params(8, 12, 3, 21);
  BspConfig config = [] {
    BspConfig c;
    c.admm_epochs = 2;
    c.retrain_epochs = 2;
    c.seed = 4;
    return c;
  }();
};

TEST_F(BspTest, UnitRatesEqualPlainRetrain) {
  const BspResult r = bsp_prune(params, uniform_partitions({2, 2}), {1.0, 1.0}, config, train_data, test_data);
  EXPECT_EQ(r.report.compression_rate, 1.0);
  for (const auto& m : r.masks) EXPECT_EQ(m.nnz(), static_cast<std::size_t>(m.rows() * m.cols()));
  TrainOptions o;
  o.epochs = config.retrain_epochs;
  o.lr = config.lr;
  o.batch = config.batch;
  o.seed = derive_seed(config.seed, "retrain");
  EXPECT_EQ(r.pruned, train(params, train_data, o).params);
}

TEST_F(BspTest, MasksAreStructuredAndRespected) {
  const PruneRates rates{2.0, 1.5};
  const BspResult r = bsp_prune(params, uniform_partitions({3, 2}), rates, config, train_data, test_data);
  for (WeightId id : kWeightIds) {
    const StructuredMask& m = r.masks[static_cast<std::size_t>(id)];
    const MatrixXd& w = r.pruned.weight(id);
    ASSERT_TRUE(is_bsp_feasible(m.grid(), m.partition()));
    const BoolMatrix g = m.grid();
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j)
        if (!g(i, j)) {
          EXPECT_EQ(w(i, j), 0.0);
        }
    const SparsityConstraint c = constraint_from_rates(w.rows(), w.cols(), m.partition(), rates.col_rate, rates.row_rate);
    EXPECT_EQ(static_cast<Index>(m.kept_rows().size()), c.row_keep);
    for (Index s = 0; s < m.partition().num_r; ++s)
      for (Index b = 0; b < m.partition().num_c; ++b)
        EXPECT_LE(static_cast<Index>(m.block_cols(s, b).size()), c.col_keep[static_cast<std::size_t>(b)]);
  }
  EXPECT_GT(r.report.compression_rate, 2.0);
  EXPECT_EQ(r.report.prunable, 3u * 12u * (8u + 12u));
  EXPECT_EQ(r.report.matrices.size(), 6u);
}

TEST_F(BspTest, Deterministic) {
  const BspResult a = bsp_prune(params, uniform_partitions({2, 2}), {2.0, 2.0}, config, train_data, test_data);
  const BspResult b = bsp_prune(params, uniform_partitions({2, 2}), {2.0, 2.0}, config, train_data, test_data);
  EXPECT_EQ(a.pruned, b.pruned);
  EXPECT_EQ(a.report.loss_curve, b.report.loss_curve);
}

TEST_F(BspTest, InfeasibleRatesThrow) {
  EXPECT_THROW(bsp_prune(params, uniform_partitions({20, 2}), {2.0, 2.0}, config, train_data, test_data),
               InfeasibleError);
  EXPECT_THROW(bsp_prune(params, uniform_partitions({2, 2}), {0.5, 1.0}, config, train_data, test_data),
               InfeasibleError);
}

TEST(CompressionRate, Arithmetic) {
  // 1 of every 16 columns and 1 of every 2 rows on a divisible shape
  const StructuredMask full = StructuredMask::full(32, 64, {1, 4});
  WeightMasks masks;
  std::vector<StructuredMask> pruned;
  for (int k = 0; k < 6; ++k) {
    const MatrixXd w = MatrixXd::Ones(32, 64);
    auto cols = select_block_columns(w, {1, 4}, std::vector<Index>{1, 1, 1, 1});
    std::vector<Index> rows;
    for (Index i = 0; i < 32; i += 2) rows.push_back(i);
    pruned.push_back(StructuredMask::from_selection(cols, rows));
  }
  EXPECT_DOUBLE_EQ(compression_rate(pruned), 32.0);
  const std::vector<StructuredMask> all(6, full);
  EXPECT_DOUBLE_EQ(compression_rate(all), 1.0);
  const std::vector<StructuredMask> empty(1, StructuredMask(4, 4, {1, 1}, {}, {{}}));
  EXPECT_THROW(compression_rate(empty), InfeasibleError);
  EXPECT_EQ(round_sig3(19.0476), 19.0);
  EXPECT_EQ(round_sig3(0.123456), 0.123);
}

TEST(ReferencePrune, EightTimesKeepsAccuracy) {
  const SyntheticTask task = SyntheticTask::make(20, 16, 4, 0.5, derive_seed(42, "task"));
  const Dataset tr = task.sample(2000, "train"), te = task.sample(500, "test");
  TrainOptions o;
  o.epochs = 30;
  o.seed = derive_seed(42, "train");
  const GruParamsd dense = train(init_gru_params(16, 32, 4, derive_seed(42, "model")), tr, o).params;
  BspConfig c;
  c.seed = derive_seed(42, "prune");
  const BspResult r = bsp_prune(dense, uniform_partitions({4, 4}), {4.0, 2.0}, c, tr, te);
  EXPECT_DOUBLE_EQ(r.report.compression_rate, 8.0);
  for (const auto& m : r.masks) EXPECT_TRUE(is_bsp_feasible(m.grid(), m.partition()));
  EXPECT_GE(r.report.accuracy_after, r.report.accuracy_before - 0.02);
}

}  // namespace
}  // namespace bspgru
