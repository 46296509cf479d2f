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

#include <cmath>

#include "bspgru/tensor/gru.hpp"
#include "test_util.hpp"

namespace bspgru {
namespace {

using testing::random_vector;

// Element-by-element GRU step written independently of the vectorized path.
struct ScalarStep {
  std::vector<double> z, r, ht, h;
};

ScalarStep scalar_gru_step(const GruParamsd& p, const std::vector<double>& x,
                           const std::vector<double>& hp) {
  const std::size_t hid = hp.size(), in = x.size();
  auto sig = [](double a) { return 1.0 / (1.0 + std::exp(-a)); };
  ScalarStep s;
  s.z.resize(hid);
  s.r.resize(hid);
  s.ht.resize(hid);
  s.h.resize(hid);
  for (std::size_t i = 0; i < hid; ++i) {
    double az = p.b_z[static_cast<Index>(i)], ar = p.b_r[static_cast<Index>(i)];
    for (std::size_t j = 0; j < in; ++j) {
      az += p.w_z(static_cast<Index>(i), static_cast<Index>(j)) * x[j];
      ar += p.w_r(static_cast<Index>(i), static_cast<Index>(j)) * x[j];
    }
    for (std::size_t j = 0; j < hid; ++j) {
      az += p.u_z(static_cast<Index>(i), static_cast<Index>(j)) * hp[j];
      ar += p.u_r(static_cast<Index>(i), static_cast<Index>(j)) * hp[j];
    }
    s.z[i] = sig(az);
    s.r[i] = sig(ar);
  }
  for (std::size_t i = 0; i < hid; ++i) {
    double ah = p.b_h[static_cast<Index>(i)];
    for (std::size_t j = 0; j < in; ++j) ah += p.w_h(static_cast<Index>(i), static_cast<Index>(j)) * x[j];
    for (std::size_t j = 0; j < hid; ++j) ah += p.u_h(static_cast<Index>(i), static_cast<Index>(j)) * (s.r[j] * hp[j]);
    s.ht[i] = std::tanh(ah);
    s.h[i] = s.z[i] * hp[i] + (1.0 - s.z[i]) * s.ht[i];
  }
  return s;
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

TEST(GruCell, ZeroWeightsGiveHalfGates) {
  const GruParamsd p = GruParamsd::zeros(3, 4, 2);
  const VectorXd x = VectorXd::LinSpaced(3, -1.0, 2.0);
  const VectorXd v = VectorXd::LinSpaced(4, 0.5, -3.0);
  const GruState<double> s = gru_cell_forward(p, x, v);
  for (Index i = 0; i < 4; ++i) {
    EXPECT_EQ(s.z[i], 0.5);
    EXPECT_EQ(s.r[i], 0.5);
    EXPECT_EQ(s.h_tilde[i], 0.0);
    EXPECT_EQ(s.h[i], 0.5 * v[i]);
  }
}

TEST(GruCell, ZeroStateIsAFixedPointWithoutBias) {
  GruParamsd p = init_gru_params(5, 6, 3, 7);
  const GruState<double> s = gru_cell_forward(p, VectorXd::Zero(5), VectorXd::Zero(6));
  EXPECT_TRUE(s.h.isZero(0.0));
}

TEST(GruCell, MatchesScalarOracle) {
  const GruParamsd p = init_gru_params(2, 3, 2, 42);
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd x = random_vector(rng, 2), h = random_vector(rng, 3);
    const GruState<double> s = gru_cell_forward(p, x, h);
    const ScalarStep o = scalar_gru_step(p, to_std(x), to_std(h));
    for (Index i = 0; i < 3; ++i) {
      EXPECT_NEAR(s.z[i], o.z[static_cast<std::size_t>(i)], 1e-15);
      EXPECT_NEAR(s.r[i], o.r[static_cast<std::size_t>(i)], 1e-15);
      EXPECT_NEAR(s.h_tilde[i], o.ht[static_cast<std::size_t>(i)], 1e-15);
      EXPECT_NEAR(s.h[i], o.h[static_cast<std::size_t>(i)], 1e-15);
    }
  }
}

TEST(GruCell, GatesStayInOpenIntervals) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    GruParamsd p = init_gru_params(4, 5, 2, rng.next_u64());
    const VectorXd x = 3.0 * random_vector(rng, 4), h = random_vector(rng, 5);
    const GruState<double> s = gru_cell_forward(p, x, h);
    for (Index i = 0; i < 5; ++i) {
      EXPECT_GT(s.z[i], 0.0);
      EXPECT_LT(s.z[i], 1.0);
      EXPECT_GT(s.r[i], 0.0);
      EXPECT_LT(s.r[i], 1.0);
      EXPECT_GT(s.h_tilde[i], -1.0);
      EXPECT_LT(s.h_tilde[i], 1.0);
    }
  }
}

TEST(GruCell, SigmoidIsStableAtExtremes) {
  EXPECT_EQ(sigmoid(-800.0), 0.0);
  EXPECT_EQ(sigmoid(800.0), 1.0);
  EXPECT_TRUE(std::isfinite(sigmoid(-1e308)));
}

TEST(GruCell, RejectsBadInput) {
  const GruParamsd p = GruParamsd::zeros(2, 3, 2);
  EXPECT_THROW(gru_cell_forward(p, VectorXd::Zero(3), VectorXd::Zero(3)), InvariantError);
  EXPECT_THROW(gru_cell_forward(p, VectorXd::Zero(2), VectorXd::Zero(2)), InvariantError);
  VectorXd x = VectorXd::Zero(2);
  x[1] = std::nan("");
  EXPECT_THROW(gru_cell_forward(p, x, VectorXd::Zero(3)), NumericError);
  GruParamsd bad = p;
  bad.u_h.resize(3, 2);
  EXPECT_THROW(gru_cell_forward(bad, VectorXd::Zero(2), VectorXd::Zero(3)), InvariantError);
}

TEST(GruSequence, SingleStepIsCellPlusReadout) {
  const GruParamsd p = init_gru_params(3, 4, 3, 11);
  Rng rng(11);
  const MatrixXd xs = testing::random_matrix(rng, 1, 3);
  const VectorXd h0 = random_vector(rng, 4);
  const auto seq = gru_forward_sequence(p, xs, h0);
  const GruState<double> s = gru_cell_forward(p, VectorXd(xs.row(0).transpose()), h0);
  ASSERT_EQ(seq.states.size(), 1u);
  EXPECT_TRUE(testing::bitwise_equal(seq.states[0].h, s.h));
  const VectorXd logits = ordered_matvec(p.readout_w, s.h) + p.readout_b;
  EXPECT_TRUE(testing::bitwise_equal(seq.logits, logits));
}

TEST(GruSequence, EqualsChainedCells) {
  const GruParamsd p = init_gru_params(3, 4, 2, 5);
  Rng rng(5);
  const MatrixXd xs = testing::random_matrix(rng, 5, 3);
  const auto seq = gru_forward_sequence(p, xs, VectorXd::Zero(4));
  VectorXd h = VectorXd::Zero(4);
  for (Index t = 0; t < 5; ++t) {
    h = gru_cell_forward(p, VectorXd(xs.row(t).transpose()), h).h;
    EXPECT_TRUE(testing::bitwise_equal(seq.states[static_cast<std::size_t>(t)].h, h));
  }
}

TEST(GruSequence, ZeroParamsGiveZeroLogits) {
  const GruParamsd p = GruParamsd::zeros(3, 4, 5);
  Rng rng(1);
  const auto seq = gru_forward_sequence(p, testing::random_matrix(rng, 6, 3), VectorXd::Zero(4));
  EXPECT_TRUE(seq.logits.isZero(0.0));
  EXPECT_EQ(seq.logits.size(), 5);
}

TEST(GruSequence, EmptySequenceThrows) {
  const GruParamsd p = GruParamsd::zeros(3, 4, 2);
  EXPECT_THROW(gru_forward_sequence(p, MatrixXd(0, 3), VectorXd::Zero(4)), InvariantError);
}

TEST(GruParams, ParameterCountFormula) {
  for (auto [i, h, c] : {std::tuple<Index, Index, Index>{16, 32, 4}, {2, 3, 2}, {7, 1, 9}}) {
    const GruParamsd p = init_gru_params(i, h, c, 1);
    EXPECT_EQ(p.parameter_count(), static_cast<std::size_t>(3 * h * (i + h + 1) + c * (h + 1)));
    EXPECT_EQ(gru_parameter_count(i, h, c), p.parameter_count());
  }
}

TEST(GruParams, InitIsUniformInFanInBound) {
  const GruParamsd p = init_gru_params(16, 32, 4, 9);
  EXPECT_LE(p.w_z.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(16.0));
  EXPECT_LE(p.u_h.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(32.0));
  EXPECT_LE(p.readout_w.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(32.0));
  EXPECT_TRUE(p.b_z.isZero(0.0));
  EXPECT_EQ(p, init_gru_params(16, 32, 4, 9));
  EXPECT_FALSE(p == init_gru_params(16, 32, 4, 10));
}

}  // namespace
}  // namespace bspgru
