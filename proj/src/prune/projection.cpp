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

#include "bspgru/prune/projection.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace bspgru {

std::vector<Index> top_k_indices(std::span<const double> scores, Index k) {
  const auto n = static_cast<Index>(scores.size());
  require(k >= 0 && k <= n, "top_k_indices: k out of range");
  std::vector<Index> order(scores.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

BlockColumnSelection select_block_columns(const MatrixXd& w, const BlockPartition& part,
                                          std::span<const Index> keep) {
  part.validate(w.rows(), w.cols());
  require(static_cast<Index>(keep.size()) == part.num_c,
          "select_block_columns: need one keep count per block column");
  for (Index b = 0; b < part.num_c; ++b) {
    const Index width = part.block(b, w.cols()).size();
    const Index k = keep[static_cast<std::size_t>(b)];
    if (k < 0 || k > width) {
      throw InfeasibleError(
          fmt::format("cannot keep {} columns in block {} of width {}", k, b, width));
    }
  }

  BlockColumnSelection sel{w.rows(), w.cols(), part, {}};
  sel.kept_cols.resize(static_cast<std::size_t>(part.block_count()));
  std::vector<double> norms;
  for (Index s = 0; s < part.num_r; ++s) {
    const IndexRange rr = part.strip(s, w.rows());
    for (Index b = 0; b < part.num_c; ++b) {
      const IndexRange cr = part.block(b, w.cols());
      norms.assign(static_cast<std::size_t>(cr.size()), 0.0);
      for (Index i = rr.begin; i < rr.end; ++i)
        for (Index j = cr.begin; j < cr.end; ++j) norms[static_cast<std::size_t>(j - cr.begin)] += w(i, j) * w(i, j);
      auto local = top_k_indices(norms, keep[static_cast<std::size_t>(b)]);
      for (auto& j : local) j += cr.begin;
      sel.kept_cols[static_cast<std::size_t>(s * part.num_c + b)] = std::move(local);
    }
  }
  return sel;
}

std::vector<Index> select_rows(const MatrixXd& w, Index row_keep) {
  if (row_keep < 0 || row_keep > w.rows()) {
    throw InfeasibleError(fmt::format("cannot keep {} rows of {}", row_keep, w.rows()));
  }
  std::vector<double> norms(static_cast<std::size_t>(w.rows()));
  for (Index i = 0; i < w.rows(); ++i) norms[static_cast<std::size_t>(i)] = w.row(i).squaredNorm();
  return top_k_indices(norms, row_keep);
}

MatrixXd apply_selection(const MatrixXd& w, const BlockColumnSelection& sel) {
  require(w.rows() == sel.rows && w.cols() == sel.cols, "apply_selection: shape mismatch");
  MatrixXd out = MatrixXd::Zero(w.rows(), w.cols());
  const BlockPartition& part = sel.partition;
  for (Index s = 0; s < part.num_r; ++s) {
    const IndexRange rr = part.strip(s, w.rows());
    for (Index b = 0; b < part.num_c; ++b) {
      for (Index j : sel.kept_cols[static_cast<std::size_t>(s * part.num_c + b)]) {
        for (Index i = rr.begin; i < rr.end; ++i) out(i, j) = w(i, j);
      }
    }
  }
  return out;
}

MatrixXd apply_row_selection(const MatrixXd& w, std::span<const Index> kept_rows) {
  MatrixXd out = MatrixXd::Zero(w.rows(), w.cols());
  for (Index i : kept_rows) {
    require(i >= 0 && i < w.rows(), "apply_row_selection: row id out of range");
    out.row(i) = w.row(i);
  }
  return out;
}

MatrixXd project_block_columns(const MatrixXd& w, const BlockPartition& part, Index k) {
  part.validate(w.rows(), w.cols());
  const std::vector<Index> keep(static_cast<std::size_t>(part.num_c), k);
  return project_block_columns(w, part, keep);
}

MatrixXd project_block_columns(const MatrixXd& w, const BlockPartition& part,
                               std::span<const Index> keep) {
  return apply_selection(w, select_block_columns(w, part, keep));
}

MatrixXd project_rows(const MatrixXd& w, Index row_keep) {
  return apply_row_selection(w, select_rows(w, row_keep));
}

}  // namespace bspgru
