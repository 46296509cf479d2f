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

#include <filesystem>

#include "bspgru/binary_io.hpp"
#include "bspgru/bspc/bspc_matrix.hpp"

namespace bspgru {

// "BSPC" | version u32 | rows u32 | cols u32 | num_r u32 | num_c u32 |
// kept-row count u32 + ids | perm flag u8 (+ one id per kept row) |
// per (strip, block) row-major: kept-col count u32 + ids, value grid f64.
inline constexpr std::uint32_t kBspcVersion = 1;

Bytes serialize(const BspcMatrix<double>& bspc);

/// Throws ParseError: kBadMagic / kBadVersion / kTruncated / kCorrupt,
/// each with the byte offset where decoding failed.
BspcMatrix<double> deserialize(std::span<const std::uint8_t> bytes);

void save_bspc(const std::filesystem::path& path, const BspcMatrix<double>& bspc);
BspcMatrix<double> load_bspc(const std::filesystem::path& path);

}  // namespace bspgru
