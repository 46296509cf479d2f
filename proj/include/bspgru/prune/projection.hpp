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

#include <span>
#include <vector>

#include "bspgru/core.hpp"
#include "bspgru/prune/partition.hpp"

namespace bspgru {

/// Indices of the k largest values, ties to the lower index, returned in
/// ascending index order.
std::vector<Index> top_k_indices(std::span<const double> scores, Index k);

/// Kept column ids for every (strip, block), indexed s * num_c + b.
struct BlockColumnSelection {
  Index rows = 0;
  Index cols = 0;
  BlockPartition partition;
  std::vector<std::vector<Index>> kept_cols;
};

/// In each block, the columns with the largest L2 norm over the block's
/// rows. `keep[b]` columns are kept in every block of block column b.
BlockColumnSelection select_block_columns(const MatrixXd& w, const BlockPartition& part,
                                          std::span<const Index> keep);

/// Rows with the largest L2 norm over the whole matrix, ascending.
std::vector<Index> select_rows(const MatrixXd& w, Index row_keep);

MatrixXd apply_selection(const MatrixXd& w, const BlockColumnSelection& sel);
MatrixXd apply_row_selection(const MatrixXd& w, std::span<const Index> kept_rows);

/// Euclidean projection onto matrices with at most k nonzero columns per
/// block: the k largest-norm columns of each block survive verbatim.
/// Throws InfeasibleError if k exceeds a block's width.
MatrixXd project_block_columns(const MatrixXd& w, const BlockPartition& part, Index k);
MatrixXd project_block_columns(const MatrixXd& w, const BlockPartition& part,
                               std::span<const Index> keep);

/// Euclidean projection onto matrices with at most row_keep nonzero rows.
MatrixXd project_rows(const MatrixXd& w, Index row_keep);

}  // namespace bspgru
