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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bspgru/core.hpp"

namespace bspgru {

enum class ParseErrorKind { kBadMagic, kBadVersion, kTruncated, kCorrupt };

const char* to_string(ParseErrorKind kind);

/// Failure while decoding one of the binary file formats; carries the byte
/// offset where decoding stopped.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, const std::string& detail);
  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
};

/// I/O failure (missing file, unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

using Bytes = std::vector<std::uint8_t>;

/// Little-endian append-only encoder.
class ByteWriter {
 public:
  void magic(std::string_view four_cc);
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v);
  void u32_checked(std::size_t v);  // throws if v does not fit in 32 bits
  void f64(double v);

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

/// Little-endian bounds-checked decoder; every failure is a ParseError at
/// the current offset.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  void expect_magic(std::string_view four_cc);
  void expect_version(std::uint32_t supported);
  std::uint8_t u8();
  std::uint32_t u32();
  double f64();

  /// A count that will size an allocation of `element_size` bytes each;
  /// rejected as truncation when the remaining bytes cannot hold it.
  std::uint32_t count(std::size_t element_size);

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  void expect_end() const;

  [[noreturn]] void corrupt(const std::string& detail) const;
  [[noreturn]] void corrupt_at(std::size_t offset, const std::string& detail) const;

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

}  // namespace bspgru
