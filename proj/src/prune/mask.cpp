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

#include "bspgru/prune/mask.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace bspgru {
namespace {

bool strictly_increasing(const std::vector<Index>& ids) {
  return std::adjacent_find(ids.begin(), ids.end(), std::greater_equal<Index>()) == ids.end();
}

}  // namespace

StructuredMask::StructuredMask(Index rows, Index cols, BlockPartition partition,
                               std::vector<Index> kept_rows,
                               std::vector<std::vector<Index>> block_cols)
    : rows_(rows),
      cols_(cols),
      partition_(partition),
      kept_rows_(std::move(kept_rows)),
      block_cols_(std::move(block_cols)) {
  partition_.validate(rows_, cols_);
  require(strictly_increasing(kept_rows_), "StructuredMask: kept rows must be sorted and unique");
  require(kept_rows_.empty() || (kept_rows_.front() >= 0 && kept_rows_.back() < rows_),
          "StructuredMask: kept row id out of range");
  require(static_cast<Index>(block_cols_.size()) == partition_.block_count(),
          "StructuredMask: need one column list per block");
  for (Index s = 0; s < partition_.num_r; ++s) {
    for (Index b = 0; b < partition_.num_c; ++b) {
      const auto& ids = block_cols_[static_cast<std::size_t>(s * partition_.num_c + b)];
      const IndexRange range = partition_.block(b, cols_);
      require(strictly_increasing(ids), "StructuredMask: block columns must be sorted and unique");
      if (!ids.empty() && (!range.contains(ids.front()) || !range.contains(ids.back()))) {
        throw InvariantError(
            fmt::format("StructuredMask: column outside block ({}, {}) range", s, b));
      }
    }
  }
}

StructuredMask StructuredMask::full(Index rows, Index cols, BlockPartition partition) {
  partition.validate(rows, cols);
  std::vector<Index> kept(static_cast<std::size_t>(rows));
  std::iota(kept.begin(), kept.end(), Index{0});
  std::vector<std::vector<Index>> block_cols;
  for (Index s = 0; s < partition.num_r; ++s) {
    for (Index b = 0; b < partition.num_c; ++b) {
      const IndexRange range = partition.block(b, cols);
      std::vector<Index> ids(static_cast<std::size_t>(range.size()));
      std::iota(ids.begin(), ids.end(), range.begin);
      block_cols.push_back(std::move(ids));
    }
  }
  return StructuredMask(rows, cols, partition, std::move(kept), std::move(block_cols));
}

StructuredMask StructuredMask::from_selection(const BlockColumnSelection& cols,
                                              std::vector<Index> kept_rows) {
  return StructuredMask(cols.rows, cols.cols, cols.partition, std::move(kept_rows),
                        cols.kept_cols);
}

std::optional<StructuredMask> StructuredMask::from_grid(const BoolMatrix& grid,
                                                        const BlockPartition& partition) {
  const Index rows = grid.rows(), cols = grid.cols();
  if (!partition.fits(rows, cols)) return std::nullopt;
  std::vector<Index> kept;
  for (Index i = 0; i < rows; ++i)
    if (grid.row(i).any()) kept.push_back(i);
  std::vector<std::vector<Index>> block_cols(static_cast<std::size_t>(partition.block_count()));
  for (Index s = 0; s < partition.num_r; ++s) {
    const IndexRange rr = partition.strip(s, rows);
    for (Index b = 0; b < partition.num_c; ++b) {
      const IndexRange cr = partition.block(b, cols);
      auto& ids = block_cols[static_cast<std::size_t>(s * partition.num_c + b)];
      for (Index j = cr.begin; j < cr.end; ++j)
        if (grid.block(rr.begin, j, rr.size(), 1).any()) ids.push_back(j);
    }
  }
  StructuredMask mask(rows, cols, partition, std::move(kept), std::move(block_cols));
  if (mask.grid() != grid) return std::nullopt;
  return mask;
}

std::vector<Index> StructuredMask::kept_rows_in_strip(Index s) const {
  const IndexRange rr = partition_.strip(s, rows_);
  auto lo = std::lower_bound(kept_rows_.begin(), kept_rows_.end(), rr.begin);
  auto hi = std::lower_bound(lo, kept_rows_.end(), rr.end);
  return {lo, hi};
}

BoolMatrix StructuredMask::grid() const {
  BoolMatrix g = BoolMatrix::Constant(rows_, cols_, false);
  for (Index i : kept_rows_) {
    const Index s = partition_.strip_of(i, rows_);
    for (Index b = 0; b < partition_.num_c; ++b)
      for (Index j : block_cols(s, b)) g(i, j) = true;
  }
  return g;
}

std::size_t StructuredMask::nnz() const {
  std::size_t total = 0;
  for (Index s = 0; s < partition_.num_r; ++s) {
    std::size_t width = 0;
    for (Index b = 0; b < partition_.num_c; ++b) width += block_cols(s, b).size();
    total += kept_rows_in_strip(s).size() * width;
  }
  return total;
}

StructuredMask StructuredMask::canonical() const {
  StructuredMask out = *this;
  for (Index s = 0; s < partition_.num_r; ++s) {
    if (!kept_rows_in_strip(s).empty()) continue;
    for (Index b = 0; b < partition_.num_c; ++b)
      out.block_cols_[static_cast<std::size_t>(s * partition_.num_c + b)].clear();
  }
  return out;
}

bool StructuredMask::same_support(const StructuredMask& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && grid() == other.grid();
}

bool is_bsp_feasible(const BoolMatrix& grid, const BlockPartition& partition) {
  return StructuredMask::from_grid(grid, partition).has_value();
}

}  // namespace bspgru
