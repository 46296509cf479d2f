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

#include "bspgru/binary_io.hpp"

#include <fstream>
#include <iterator>
#include <limits>

#include <fmt/format.h>

namespace bspgru {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kBadMagic:
      return "bad-magic";
    case ParseErrorKind::kBadVersion:
      return "bad-version";
    case ParseErrorKind::kTruncated:
      return "truncated";
    case ParseErrorKind::kCorrupt:
      return "corrupt";
  }
  return "unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t offset, const std::string& detail)
    : Error(fmt::format("{} at byte {}: {}", to_string(kind), offset, detail)),
      kind_(kind),
      offset_(offset) {}

void ByteWriter::magic(std::string_view four_cc) {
  require(four_cc.size() == 4, "magic must be four bytes");
  out_.insert(out_.end(), four_cc.begin(), four_cc.end());
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u32_checked(std::size_t v) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw InvariantError(fmt::format("value {} does not fit a 32-bit field", v));
  }
  u32(static_cast<std::uint32_t>(v));
}

void ByteWriter::f64(double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

void ByteReader::need(std::size_t n) const {
  if (remaining() < n) {
    throw ParseError(ParseErrorKind::kTruncated, data_.size(),
                     fmt::format("needed {} bytes at offset {}, {} available", n, pos_,
                                 remaining()));
  }
}

void ByteReader::expect_magic(std::string_view four_cc) {
  const std::size_t at = pos_;
  need(4);
  if (std::memcmp(data_.data() + pos_, four_cc.data(), 4) != 0) {
    throw ParseError(ParseErrorKind::kBadMagic, at,
                     fmt::format("expected magic \"{}\"", four_cc));
  }
  pos_ += 4;
}

void ByteReader::expect_version(std::uint32_t supported) {
  const std::size_t at = pos_;
  const std::uint32_t v = u32();
  if (v != supported) {
    throw ParseError(ParseErrorKind::kBadVersion, at,
                     fmt::format("version {} (supported: {})", v, supported));
  }
}

std::uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{data_[pos_ + i]} << (8 * i);
  pos_ += 4;
  return v;
}

double ByteReader::f64() {
  need(8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t{data_[pos_ + i]} << (8 * i);
  pos_ += 8;
  return std::bit_cast<double>(bits);
}

std::uint32_t ByteReader::count(std::size_t element_size) {
  const std::uint32_t n = u32();
  if (element_size > 0 && std::uint64_t{n} * element_size > remaining()) {
    throw ParseError(ParseErrorKind::kTruncated, data_.size(),
                     fmt::format("count {} at offset {} exceeds remaining {} bytes", n,
                                 pos_ - 4, remaining()));
  }
  return n;
}

void ByteReader::expect_end() const {
  if (remaining() != 0) corrupt(fmt::format("{} trailing bytes", remaining()));
}

void ByteReader::corrupt(const std::string& detail) const { corrupt_at(pos_, detail); }

void ByteReader::corrupt_at(std::size_t offset, const std::string& detail) const {
  throw ParseError(ParseErrorKind::kCorrupt, offset, detail);
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
}

}  // namespace bspgru
