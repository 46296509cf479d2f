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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "bspgru/core.hpp"
#include "bspgru/prune/mask.hpp"
#include "bspgru/random.hpp"

namespace bspgru::testing {

inline MatrixXd random_matrix(Rng& rng, Index rows, Index cols) {
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

inline VectorXd random_vector(Rng& rng, Index n) {
  VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

/// Each id in [begin, end) kept with probability p.
inline std::vector<Index> random_subset(Rng& rng, Index begin, Index end, double p) {
  std::vector<Index> out;
  for (Index i = begin; i < end; ++i)
    if (rng.uniform() < p) out.push_back(i);
  return out;
}

inline BlockPartition random_partition(Rng& rng, Index rows, Index cols) {
  for (;;) {
    BlockPartition p{1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(rows))),
                     1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(cols)))};
    if (p.fits(rows, cols)) return p;
  }
}

/// Random BSP mask; with `density` near 1 most cells survive, blocks and
/// strips may come out empty.
inline StructuredMask random_mask(Rng& rng, Index rows, Index cols, const BlockPartition& part,
                                  double density = 0.6) {
  std::vector<Index> kept = random_subset(rng, 0, rows, density);
  std::vector<std::vector<Index>> block_cols;
  for (Index s = 0; s < part.num_r; ++s) {
    for (Index b = 0; b < part.num_c; ++b) {
      const IndexRange r = part.block(b, cols);
      block_cols.push_back(random_subset(rng, r.begin, r.end, density));
    }
  }
  return StructuredMask(rows, cols, part, std::move(kept), std::move(block_cols));
}

/// Dense matrix supported on `mask` (zero elsewhere).
inline MatrixXd random_on_mask(Rng& rng, const StructuredMask& mask) {
  const BoolMatrix g = mask.grid();
  MatrixXd m = MatrixXd::Zero(mask.rows(), mask.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (g(i, j)) m(i, j) = rng.normal();
  return m;
}

struct RandomBsp {
  MatrixXd dense;
  StructuredMask mask;
};

inline RandomBsp random_bsp(Rng& rng, Index max_rows, Index max_cols, double density = 0.6) {
  const Index rows = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_rows)));
  const Index cols = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_cols)));
  const BlockPartition part = random_partition(rng, rows, cols);
  StructuredMask mask = random_mask(rng, rows, cols, part, density);
  MatrixXd dense = random_on_mask(rng, mask);
  return {std::move(dense), std::move(mask)};
}

/// Relative deviation with a unit floor on the denominator.
template <typename A, typename B>
double max_rel_error(const Eigen::MatrixBase<A>& got, const Eigen::MatrixBase<B>& want) {
  if (got.rows() != want.rows() || got.cols() != want.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Index i = 0; i < want.rows(); ++i)
    for (Index j = 0; j < want.cols(); ++j)
      worst = std::max(worst, std::abs(got(i, j) - want(i, j)) / std::max(1.0, std::abs(want(i, j))));
  return worst;
}

template <typename A, typename B>
bool bitwise_equal(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      const double x = a(i, j), y = b(i, j);
      if (std::memcmp(&x, &y, sizeof(double)) != 0) return false;
    }
  return true;
}

}  // namespace bspgru::testing
