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
#include "bspgru/prune/bsp_prune.hpp"

namespace bspgru {

// "BSPM" | version u32 | record count u32 | per record:
//   matrix id u32, rows u32, cols u32, num_r u32, num_c u32,
//   kept-row count u32 + ids, then per (strip, block) row-major:
//   kept-col count u32 + ids.
inline constexpr std::uint32_t kMaskFileVersion = 1;

Bytes encode_masks(const WeightMasks& masks);
WeightMasks decode_masks(std::span<const std::uint8_t> bytes);

void save_masks(const std::filesystem::path& path, const WeightMasks& masks);
WeightMasks load_masks(const std::filesystem::path& path);

}  // namespace bspgru
