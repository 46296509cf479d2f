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

#include "bspgru/tensor/checkpoint.hpp"

#include <fmt/format.h>

namespace bspgru {

Bytes encode_checkpoint(const GruParamsd& params) {
  params.validate();
  ByteWriter w;
  w.magic("GRUP");
  w.u32(kCheckpointVersion);
  w.u32_checked(static_cast<std::size_t>(params.input_dim()));
  w.u32_checked(static_cast<std::size_t>(params.hidden_dim()));
  w.u32_checked(static_cast<std::size_t>(params.num_classes()));
  params.for_each_tensor([&](std::string_view, const auto& t) {
    w.u32_checked(static_cast<std::size_t>(t.size()));
    for (Index i = 0; i < t.size(); ++i) w.f64(t.data()[i]);
  });
  return std::move(w).bytes();
}

GruParamsd decode_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic("GRUP");
  r.expect_version(kCheckpointVersion);
  const std::size_t dims_at = r.offset();
  const std::uint32_t in = r.u32(), hid = r.u32(), cls = r.u32();
  if (in == 0 || hid == 0 || cls == 0) r.corrupt_at(dims_at, "zero dimension");
  GruParamsd p = GruParamsd::zeros(in, hid, cls);
  p.for_each_tensor([&](std::string_view name, auto& t) {
    const std::size_t at = r.offset();
    const std::uint32_t n = r.count(8);
    if (n != static_cast<std::uint64_t>(t.size())) {
      r.corrupt_at(at, fmt::format("tensor {} has {} values, expected {}", name, n, t.size()));
    }
    for (Index i = 0; i < t.size(); ++i) t.data()[i] = r.f64();
  });
  r.expect_end();
  return p;
}

void save_checkpoint(const std::filesystem::path& path, const GruParamsd& params) {
  write_file(path, encode_checkpoint(params));
}

GruParamsd load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file(path));
}

}  // namespace bspgru
