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
#include <vector>

#include "bspgru/core.hpp"

namespace bspgru {

struct IndexRange {
  Index begin = 0;
  Index end = 0;
  Index size() const { return end - begin; }
  bool contains(Index i) const { return i >= begin && i < end; }
};

/// Grid of num_r horizontal strips, each split into num_c column blocks.
/// Strips are ceil(rows/num_r) tall and blocks ceil(cols/num_c) wide; the
/// last strip/block takes the remainder. Partitions that would leave an
/// empty strip or block for a given shape are rejected by validate().
struct BlockPartition {
  Index num_r = 1;
  Index num_c = 1;

  Index strip_height(Index rows) const { return (rows + num_r - 1) / num_r; }
  Index block_width(Index cols) const { return (cols + num_c - 1) / num_c; }

  IndexRange strip(Index s, Index rows) const {
    const Index h = strip_height(rows);
    return {std::min(s * h, rows), std::min((s + 1) * h, rows)};
  }
  IndexRange block(Index b, Index cols) const {
    const Index w = block_width(cols);
    return {std::min(b * w, cols), std::min((b + 1) * w, cols)};
  }
  Index strip_of(Index row, Index rows) const { return row / strip_height(rows); }
  Index block_of(Index col, Index cols) const { return col / block_width(cols); }
  Index block_count() const { return num_r * num_c; }

  bool fits(Index rows, Index cols) const {
    return num_r >= 1 && num_c >= 1 && rows >= 1 && cols >= 1 &&
           (num_r - 1) * strip_height(rows) < rows && (num_c - 1) * block_width(cols) < cols;
  }
  void validate(Index rows, Index cols) const;

  bool operator==(const BlockPartition&) const = default;
};

/// Per-block column keep counts (indexed by block column b, shared by all
/// strips) and the global row keep count.
struct SparsityConstraint {
  std::vector<Index> col_keep;  // length num_c
  Index row_keep = 0;
};

/// ceil(width / rate), clamped to [1, width]. rate must be finite and >= 1.
Index keep_count(Index width, double rate);

SparsityConstraint constraint_from_rates(Index rows, Index cols, const BlockPartition& part,
                                         double col_rate, double row_rate);

}  // namespace bspgru
