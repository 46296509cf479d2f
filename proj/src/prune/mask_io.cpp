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

#include "bspgru/prune/mask_io.hpp"

#include <fmt/format.h>

namespace bspgru {
namespace {

void write_ids(ByteWriter& w, const std::vector<Index>& ids) {
  w.u32_checked(ids.size());
  for (Index id : ids) w.u32_checked(static_cast<std::size_t>(id));
}

std::vector<Index> read_ids(ByteReader& r) {
  const std::uint32_t n = r.count(4);
  std::vector<Index> ids(n);
  for (auto& id : ids) id = r.u32();
  return ids;
}

}  // namespace

Bytes encode_masks(const WeightMasks& masks) {
  ByteWriter w;
  w.magic("BSPM");
  w.u32(kMaskFileVersion);
  w.u32(static_cast<std::uint32_t>(masks.size()));
  for (WeightId id : kWeightIds) {
    const StructuredMask& m = masks[static_cast<std::size_t>(id)];
    w.u32(static_cast<std::uint32_t>(id));
    w.u32_checked(static_cast<std::size_t>(m.rows()));
    w.u32_checked(static_cast<std::size_t>(m.cols()));
    w.u32_checked(static_cast<std::size_t>(m.partition().num_r));
    w.u32_checked(static_cast<std::size_t>(m.partition().num_c));
    write_ids(w, m.kept_rows());
    for (const auto& cols : m.all_block_cols()) write_ids(w, cols);
  }
  return std::move(w).bytes();
}

WeightMasks decode_masks(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic("BSPM");
  r.expect_version(kMaskFileVersion);
  const std::size_t count_at = r.offset();
  if (r.u32() != kWeightIds.size()) r.corrupt_at(count_at, "expected six mask records");
  WeightMasks masks;
  for (WeightId id : kWeightIds) {
    const std::size_t record_at = r.offset();
    if (r.u32() != static_cast<std::uint32_t>(id)) {
      r.corrupt_at(record_at, fmt::format("expected record for {}", weight_name(id)));
    }
    const Index rows = r.u32(), cols = r.u32();
    BlockPartition part{r.u32(), r.u32()};
    if (!part.fits(rows, cols)) r.corrupt_at(record_at, "partition does not fit the shape");
    std::vector<Index> kept_rows = read_ids(r);
    std::vector<std::vector<Index>> block_cols;
    for (Index b = 0; b < part.block_count(); ++b) block_cols.push_back(read_ids(r));
    try {
      masks[static_cast<std::size_t>(id)] =
          StructuredMask(rows, cols, part, std::move(kept_rows), std::move(block_cols));
    } catch (const Error& e) {
      r.corrupt_at(record_at, e.what());
    }
  }
  r.expect_end();
  return masks;
}

void save_masks(const std::filesystem::path& path, const WeightMasks& masks) {
  write_file(path, encode_masks(masks));
}

WeightMasks load_masks(const std::filesystem::path& path) { return decode_masks(read_file(path)); }

}  // namespace bspgru
