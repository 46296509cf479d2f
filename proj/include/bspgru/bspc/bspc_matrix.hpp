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
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bspgru/core.hpp"
#include "bspgru/prune/mask.hpp"

namespace bspgru {

/// Dense input does not fit the structured support it is encoded against.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A BspcMatrix whose index lists or value grids are inconsistent.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// Block-structured compact storage.
///
/// Row ids that survive pruning are stored once for the whole matrix. Each
/// (strip, block) stores its kept column ids and a dense row-major grid of
/// values over (kept rows of the strip) x (kept columns of the block); no
/// per-element index is stored. `row_perm`, when present, is the execution
/// order of the kept rows chosen by reorder().
template <typename Scalar>
struct BspcMatrix {
  struct Block {
    std::vector<Index> cols;
    Matrix<Scalar> values;  // strip kept rows x cols.size()
  };

  Index rows = 0;
  Index cols = 0;
  BlockPartition partition;
  std::vector<Index> kept_rows;
  std::vector<Block> blocks;  // strip-major: s * num_c + b
  std::optional<std::vector<Index>> row_perm;

  const Block& block(Index s, Index b) const {
    return blocks[static_cast<std::size_t>(s * partition.num_c + b)];
  }
  Block& block(Index s, Index b) { return blocks[static_cast<std::size_t>(s * partition.num_c + b)]; }

  /// [first, last) positions in kept_rows belonging to strip s.
  std::pair<std::size_t, std::size_t> strip_rows(Index s) const {
    const IndexRange rr = partition.strip(s, rows);
    auto lo = std::lower_bound(kept_rows.begin(), kept_rows.end(), rr.begin);
    auto hi = std::lower_bound(lo, kept_rows.end(), rr.end);
    return {static_cast<std::size_t>(lo - kept_rows.begin()),
            static_cast<std::size_t>(hi - kept_rows.begin())};
  }

  /// Stored entries, explicit zeros inside kept grids included.
  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += static_cast<std::size_t>(b.values.size());
    return n;
  }

  /// Index integers: one per kept row plus one per kept column per block.
  std::size_t index_entries() const {
    std::size_t n = kept_rows.size();
    for (const auto& b : blocks) n += b.cols.size();
    return n;
  }

  /// Throws CorruptionError describing the first inconsistency.
  void validate() const {
    auto fail = [](const std::string& what) { throw CorruptionError("BspcMatrix: " + what); };
    if (rows < 1 || cols < 1) fail("dimensions must be positive");
    if (!partition.fits(rows, cols)) fail("partition does not fit the shape");
    if (static_cast<Index>(blocks.size()) != partition.block_count()) fail("block count mismatch");
    for (std::size_t k = 0; k < kept_rows.size(); ++k) {
      if (kept_rows[k] < 0 || kept_rows[k] >= rows) fail(fmt::format("kept row {} out of range", kept_rows[k]));
      if (k > 0 && kept_rows[k] <= kept_rows[k - 1]) fail("kept rows not strictly increasing");
    }
    for (Index s = 0; s < partition.num_r; ++s) {
      const auto [first, last] = strip_rows(s);
      const auto strip_kept = static_cast<Index>(last - first);
      for (Index b = 0; b < partition.num_c; ++b) {
        const Block& blk = block(s, b);
        const IndexRange range = partition.block(b, cols);
        for (std::size_t k = 0; k < blk.cols.size(); ++k) {
          if (!range.contains(blk.cols[k])) {
            fail(fmt::format("column {} outside block ({}, {})", blk.cols[k], s, b));
          }
          if (k > 0 && blk.cols[k] <= blk.cols[k - 1]) fail("block columns not strictly increasing");
        }
        if (blk.values.rows() != strip_kept || blk.values.cols() != static_cast<Index>(blk.cols.size())) {
          fail(fmt::format("value grid of block ({}, {}) is {}x{}, expected {}x{}", s, b,
                           blk.values.rows(), blk.values.cols(), strip_kept, blk.cols.size()));
        }
      }
    }
    if (row_perm) {
      if (row_perm->size() != kept_rows.size()) fail("row_perm length differs from kept rows");
      std::vector<Index> sorted = *row_perm;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != kept_rows) fail("row_perm is not a permutation of kept rows");
    }
  }

  bool operator==(const BspcMatrix& o) const {
    if (rows != o.rows || cols != o.cols || !(partition == o.partition) ||
        kept_rows != o.kept_rows || row_perm != o.row_perm || blocks.size() != o.blocks.size())
      return false;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const Block& a = blocks[k];
      const Block& b = o.blocks[k];
      if (a.cols != b.cols || a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
        return false;
      // bitwise, so NaN payloads and signed zeros are compared exactly
      if (!std::equal(a.values.data(), a.values.data() + a.values.size(), b.values.data(),
                      [](Scalar x, Scalar y) { return std::memcmp(&x, &y, sizeof(Scalar)) == 0; }))
        return false;
    }
    return true;
  }
};

/// Packs `m` against `mask`. Column lists of strips that keep no row are
/// dropped. Throws FormatError listing coordinates where `m` is nonzero
/// outside the mask.
template <typename Scalar>
BspcMatrix<Scalar> encode(const Matrix<Scalar>& m, const StructuredMask& mask) {
  require(m.rows() == mask.rows() && m.cols() == mask.cols(), "encode: shape mismatch");
  const StructuredMask canon = mask.canonical();
  const BoolMatrix support = canon.grid();
  std::vector<std::string> offending;
  std::size_t violations = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != Scalar(0) && !support(i, j)) {
        if (offending.size() < 16) offending.push_back(fmt::format("({}, {})", i, j));
        ++violations;
      }
    }
  }
  if (violations > 0) {
    std::string list;
    for (const auto& o : offending) list += (list.empty() ? "" : " ") + o;
    throw FormatError(fmt::format("encode: {} nonzero entries outside the mask: {}{}", violations,
                                  list, violations > offending.size() ? " ..." : ""));
  }

  BspcMatrix<Scalar> out;
  out.rows = m.rows();
  out.cols = m.cols();
  out.partition = canon.partition();
  out.kept_rows = canon.kept_rows();
  out.blocks.resize(static_cast<std::size_t>(out.partition.block_count()));
  for (Index s = 0; s < out.partition.num_r; ++s) {
    const std::vector<Index> strip_kept = canon.kept_rows_in_strip(s);
    for (Index b = 0; b < out.partition.num_c; ++b) {
      auto& blk = out.block(s, b);
      blk.cols = canon.block_cols(s, b);
      blk.values.resize(static_cast<Index>(strip_kept.size()), static_cast<Index>(blk.cols.size()));
      for (std::size_t r = 0; r < strip_kept.size(); ++r)
        for (std::size_t c = 0; c < blk.cols.size(); ++c)
          blk.values(static_cast<Index>(r), static_cast<Index>(c)) = m(strip_kept[r], blk.cols[c]);
    }
  }
  return out;
}

/// Dense reconstruction in original row order; zero outside the support.
template <typename Scalar>
Matrix<Scalar> decode(const BspcMatrix<Scalar>& bspc) {
  bspc.validate();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(bspc.rows, bspc.cols);
  for (Index s = 0; s < bspc.partition.num_r; ++s) {
    const auto [first, last] = bspc.strip_rows(s);
    for (Index b = 0; b < bspc.partition.num_c; ++b) {
      const auto& blk = bspc.block(s, b);
      for (std::size_t r = first; r < last; ++r)
        for (std::size_t c = 0; c < blk.cols.size(); ++c)
          out(bspc.kept_rows[r], blk.cols[c]) =
              blk.values(static_cast<Index>(r - first), static_cast<Index>(c));
    }
  }
  return out;
}

/// Kept rows only, in execution order (row_perm if present, otherwise
/// ascending): row k of the result is decode(bspc).row(order[k]).
template <typename Scalar>
Matrix<Scalar> decode_permuted(const BspcMatrix<Scalar>& bspc) {
  const Matrix<Scalar> full = decode(bspc);
  const std::vector<Index>& order = bspc.row_perm ? *bspc.row_perm : bspc.kept_rows;
  Matrix<Scalar> out(static_cast<Index>(order.size()), bspc.cols);
  for (std::size_t k = 0; k < order.size(); ++k) out.row(static_cast<Index>(k)) = full.row(order[k]);
  return out;
}

/// The structured support a BspcMatrix stores.
template <typename Scalar>
StructuredMask support_mask(const BspcMatrix<Scalar>& bspc) {
  std::vector<std::vector<Index>> cols;
  cols.reserve(bspc.blocks.size());
  for (const auto& blk : bspc.blocks) cols.push_back(blk.cols);
  return StructuredMask(bspc.rows, bspc.cols, bspc.partition, bspc.kept_rows, std::move(cols));
}

}  // namespace bspgru
