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

#include "bspgru/prune/partition.hpp"

#include <cmath>

#include <fmt/format.h>

namespace bspgru {

void BlockPartition::validate(Index rows, Index cols) const {
  if (num_r < 1 || num_c < 1) {
    throw InvariantError(fmt::format("partition {}x{}: counts must be >= 1", num_r, num_c));
  }
  if (!fits(rows, cols)) {
    throw InfeasibleError(fmt::format(
        "partition {}x{} leaves an empty strip or block on a {}x{} matrix", num_r, num_c, rows,
        cols));
  }
}

Index keep_count(Index width, double rate) {
  if (!(rate >= 1.0) || !std::isfinite(rate)) {
    throw InfeasibleError(fmt::format("compression rate {} must be finite and >= 1", rate));
  }
  if (width <= 0) return 0;
  // Guard against w/rate landing a hair above an integer.
  const double exact = static_cast<double>(width) / rate;
  const double nearest = std::round(exact);
  const double kept = std::abs(exact - nearest) < 1e-9 * std::max(1.0, exact) ? nearest
                                                                               : std::ceil(exact);
  return std::clamp<Index>(static_cast<Index>(kept), 1, width);
}

SparsityConstraint constraint_from_rates(Index rows, Index cols, const BlockPartition& part,
                                         double col_rate, double row_rate) {
  part.validate(rows, cols);
  SparsityConstraint c;
  c.col_keep.reserve(static_cast<std::size_t>(part.num_c));
  for (Index b = 0; b < part.num_c; ++b) c.col_keep.push_back(keep_count(part.block(b, cols).size(), col_rate));
  c.row_keep = keep_count(rows, row_rate);
  return c;
}

}  // namespace bspgru
