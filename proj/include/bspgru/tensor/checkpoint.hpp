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
#include "bspgru/tensor/gru.hpp"

namespace bspgru {

// "GRUP" | version u32 | I H C u32 | per tensor in field order: count u32,
// count x f64.  All little-endian.
inline constexpr std::uint32_t kCheckpointVersion = 1;

Bytes encode_checkpoint(const GruParamsd& params);
GruParamsd decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::filesystem::path& path, const GruParamsd& params);
GruParamsd load_checkpoint(const std::filesystem::path& path);

}  // namespace bspgru
