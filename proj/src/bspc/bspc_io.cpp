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

#include "bspgru/bspc/bspc_io.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace bspgru {

Bytes serialize(const BspcMatrix<double>& bspc) {
  bspc.validate();
  ByteWriter w;
  w.magic("BSPC");
  w.u32(kBspcVersion);
  w.u32_checked(static_cast<std::size_t>(bspc.rows));
  w.u32_checked(static_cast<std::size_t>(bspc.cols));
  w.u32_checked(static_cast<std::size_t>(bspc.partition.num_r));
  w.u32_checked(static_cast<std::size_t>(bspc.partition.num_c));
  w.u32_checked(bspc.kept_rows.size());
  for (Index r : bspc.kept_rows) w.u32_checked(static_cast<std::size_t>(r));
  w.u8(bspc.row_perm ? 1 : 0);
  if (bspc.row_perm) {
    for (Index r : *bspc.row_perm) w.u32_checked(static_cast<std::size_t>(r));
  }
  for (const auto& blk : bspc.blocks) {
    w.u32_checked(blk.cols.size());
    for (Index c : blk.cols) w.u32_checked(static_cast<std::size_t>(c));
    for (Index k = 0; k < blk.values.size(); ++k) w.f64(blk.values.data()[k]);
  }
  return std::move(w).bytes();
}

BspcMatrix<double> deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic("BSPC");
  r.expect_version(kBspcVersion);

  BspcMatrix<double> out;
  const std::size_t header_at = r.offset();
  out.rows = r.u32();
  out.cols = r.u32();
  out.partition.num_r = r.u32();
  out.partition.num_c = r.u32();
  if (out.rows < 1 || out.cols < 1) r.corrupt_at(header_at, "zero dimension");
  if (!out.partition.fits(out.rows, out.cols)) {
    r.corrupt_at(header_at + 8, "partition does not fit the shape");
  }

  const std::uint32_t kept = r.count(4);
  out.kept_rows.reserve(kept);
  for (std::uint32_t k = 0; k < kept; ++k) {
    const std::size_t at = r.offset();
    const Index id = r.u32();
    if (id >= out.rows) r.corrupt_at(at, fmt::format("kept row {} out of range", id));
    if (!out.kept_rows.empty() && id <= out.kept_rows.back())
      r.corrupt_at(at, "kept rows not strictly increasing");
    out.kept_rows.push_back(id);
  }

  const std::size_t flag_at = r.offset();
  const std::uint8_t flag = r.u8();
  if (flag > 1) r.corrupt_at(flag_at, fmt::format("perm flag {} is not 0 or 1", flag));
  if (flag == 1) {
    std::vector<Index> perm;
    perm.reserve(kept);
    for (std::uint32_t k = 0; k < kept; ++k) perm.push_back(r.u32());
    std::vector<Index> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != out.kept_rows) r.corrupt_at(flag_at + 1, "row_perm is not a permutation of kept rows");
    out.row_perm = std::move(perm);
  }

  out.blocks.resize(static_cast<std::size_t>(out.partition.block_count()));
  for (Index s = 0; s < out.partition.num_r; ++s) {
    const auto [first, last] = out.strip_rows(s);
    const auto strip_kept = static_cast<Index>(last - first);
    for (Index b = 0; b < out.partition.num_c; ++b) {
      auto& blk = out.block(s, b);
      const IndexRange range = out.partition.block(b, out.cols);
      const std::uint32_t n = r.count(4);
      blk.cols.reserve(n);
      for (std::uint32_t k = 0; k < n; ++k) {
        const std::size_t at = r.offset();
        const Index c = r.u32();
        if (!range.contains(c)) {
          r.corrupt_at(at, fmt::format("column {} outside block ({}, {})", c, s, b));
        }
        if (!blk.cols.empty() && c <= blk.cols.back()) {
          r.corrupt_at(at, "block columns not strictly increasing");
        }
        blk.cols.push_back(c);
      }
      const std::uint64_t values = static_cast<std::uint64_t>(strip_kept) * n;
      if (values * 8 > r.remaining()) {
        throw ParseError(ParseErrorKind::kTruncated, bytes.size(),
                         fmt::format("value grid of block ({}, {}) needs {} bytes", s, b, values * 8));
      }
      blk.values.resize(strip_kept, static_cast<Index>(n));
      for (Index k = 0; k < blk.values.size(); ++k) blk.values.data()[k] = r.f64();
    }
  }
  r.expect_end();
  return out;
}

void save_bspc(const std::filesystem::path& path, const BspcMatrix<double>& bspc) {
  write_file(path, serialize(bspc));
}

BspcMatrix<double> load_bspc(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

}  // namespace bspgru
