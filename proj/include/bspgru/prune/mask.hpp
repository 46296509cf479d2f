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

#include <optional>
#include <string>
#include <vector>

#include "bspgru/core.hpp"
#include "bspgru/prune/partition.hpp"
#include "bspgru/prune/projection.hpp"

namespace bspgru {

using BoolMatrix = Matrix<bool>;

/// Support of a block-structured pruned matrix: cell (i, j) survives iff
/// row i is in kept_rows and column j is kept by the block that holds
/// (i, j). Index lists are sorted and duplicate-free.
class StructuredMask {
 public:
  StructuredMask() = default;
  StructuredMask(Index rows, Index cols, BlockPartition partition, std::vector<Index> kept_rows,
                 std::vector<std::vector<Index>> block_cols);

  /// Nothing pruned.
  static StructuredMask full(Index rows, Index cols, BlockPartition partition);
  static StructuredMask from_selection(const BlockColumnSelection& cols,
                                       std::vector<Index> kept_rows);

  /// Recovers the index lists from a dense support. Returns nullopt when
  /// the support is not block-structured under `partition`.
  static std::optional<StructuredMask> from_grid(const BoolMatrix& grid,
                                                 const BlockPartition& partition);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const BlockPartition& partition() const { return partition_; }
  const std::vector<Index>& kept_rows() const { return kept_rows_; }
  const std::vector<Index>& block_cols(Index strip, Index block) const {
    return block_cols_[static_cast<std::size_t>(strip * partition_.num_c + block)];
  }
  const std::vector<std::vector<Index>>& all_block_cols() const { return block_cols_; }

  /// Kept rows that fall inside strip s, ascending.
  std::vector<Index> kept_rows_in_strip(Index s) const;

  BoolMatrix grid() const;
  std::size_t nnz() const;

  /// Drops column lists of blocks whose strip keeps no row; the grid is
  /// unchanged.
  StructuredMask canonical() const;

  bool same_support(const StructuredMask& other) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  BlockPartition partition_;
  std::vector<Index> kept_rows_;
  std::vector<std::vector<Index>> block_cols_;
};

bool is_bsp_feasible(const BoolMatrix& grid, const BlockPartition& partition);

}  // namespace bspgru
