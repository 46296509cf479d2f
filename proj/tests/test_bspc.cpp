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

#include <gtest/gtest.h>

#include <cstring>

#include "bspgru/bspc/bspc_io.hpp"
#include "bspgru/bspc/csr.hpp"
#include "bspgru/kernel/schedule.hpp"
#include "test_util.hpp"

namespace bspgru {
namespace {

using testing::bitwise_equal;
using testing::random_mask;
using testing::random_on_mask;
using testing::random_partition;

std::vector<Index> iota(Index begin, Index end) {
  std::vector<Index> v;
  for (Index i = begin; i < end; ++i) v.push_back(i);
  return v;
}

// 8x8, 2x2 blocks, rows {0, 2, 4, 6}, columns {0, 2} / {4, 6} in every strip.
StructuredMask example_mask() {
  return StructuredMask(8, 8, {2, 2}, {0, 2, 4, 6}, {{0, 2}, {4, 6}, {0, 2}, {4, 6}});
}

TEST(Encode, DenseFourByFour) {
  Rng rng(1);
  const MatrixXd m = testing::random_matrix(rng, 4, 4);
  const auto b = encode(m, StructuredMask::full(4, 4, {1, 1}));
  EXPECT_EQ(b.kept_rows, iota(0, 4));
  EXPECT_EQ(b.block(0, 0).cols, iota(0, 4));
  EXPECT_EQ(index_overhead(b), (IndexOverhead{8, 21}));
  EXPECT_EQ(to_csr(m).index_entries(), 21u);
}

TEST(Encode, EightByEightExample) {
  Rng rng(2);
  const StructuredMask mask = example_mask();
  const MatrixXd m = random_on_mask(rng, mask);
  const auto b = encode(m, mask);
  EXPECT_EQ(b.index_entries(), 12u);
  EXPECT_EQ(index_overhead(b), (IndexOverhead{12, 25}));
  EXPECT_EQ(to_csr(m).index_entries(), 25u);  // independent count from the dense matrix
}

TEST(Encode, EmptyBlockStoresNothing) {
  Rng rng(3);
  const StructuredMask mask(8, 8, {2, 2}, iota(0, 8), {{0, 1}, {}, {2}, {4, 7}});
  const auto b = encode(random_on_mask(rng, mask), mask);
  EXPECT_TRUE(b.block(0, 1).cols.empty());
  EXPECT_EQ(b.block(0, 1).values.size(), 0);
  EXPECT_EQ(b.index_entries(), 8u + 2 + 0 + 1 + 2);
}

TEST(Encode, SupportViolationListsCoordinates) {
  MatrixXd m = MatrixXd::Zero(8, 8);
  m(1, 3) = 1.0;
  m(7, 0) = 2.0;
  try {
    encode(m, example_mask());
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("(1, 3)"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("(7, 0)"), std::string::npos);
  }
}

TEST(Decode, AllEmptyIsZero) {
  const StructuredMask mask(5, 6, {2, 3}, {}, std::vector<std::vector<Index>>(6));
  const auto b = encode(MatrixXd(MatrixXd::Zero(5, 6)), mask);
  EXPECT_TRUE(decode(b).isZero(0.0));
  EXPECT_EQ(index_overhead(b), (IndexOverhead{0, 6}));
}

TEST(Decode, SingleCell) {
  const StructuredMask mask(4, 6, {2, 2}, {3}, {{}, {}, {}, {4}});
  MatrixXd m = MatrixXd::Zero(4, 6);
  m(3, 4) = -2.5;
  const MatrixXd d = decode(encode(m, mask));
  EXPECT_EQ((d.array() != 0.0).count(), 1);
  EXPECT_EQ(d(3, 4), -2.5);
}

TEST(Decode, MalformedIndexListsAreCorruption) {
  Rng rng(4);
  const StructuredMask mask = example_mask();
  const auto good = encode(random_on_mask(rng, mask), mask);
  auto b = good;
  b.kept_rows = {2, 0, 4, 6};
  EXPECT_THROW(decode(b), CorruptionError);
  b = good;
  b.block(0, 0).cols = {0, 5};  // 5 is outside block 0
  EXPECT_THROW(decode(b), CorruptionError);
  b = good;
  b.block(1, 1).values.resize(1, 2);
  EXPECT_THROW(decode(b), CorruptionError);
  b = good;
  b.row_perm = std::vector<Index>{0, 2, 2, 6};
  EXPECT_THROW(decode(b), CorruptionError);
}

TEST(Csr, Diagonal) {
  const CsrMatrix<double> c = to_csr(MatrixXd(MatrixXd::Identity(4, 4)));
  EXPECT_EQ(c.col_idx, (std::vector<Index>{0, 1, 2, 3}));
  EXPECT_EQ(c.row_ptr, (std::vector<Index>{0, 1, 2, 3, 4}));
}

TEST(Csr, MatchesBspcSupport) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Index rows = 2 + static_cast<Index>(rng.below(9)), cols = 2 + static_cast<Index>(rng.below(9));
    const StructuredMask mask = random_mask(rng, rows, cols, random_partition(rng, rows, cols));
    const MatrixXd m = random_on_mask(rng, mask);  // normal draws are never exactly zero
    const auto b = encode(m, mask);
    const auto a = to_csr(b), d = to_csr(m);
    EXPECT_EQ(a.row_ptr, d.row_ptr);
    EXPECT_EQ(a.col_idx, d.col_idx);
    EXPECT_EQ(a.values, d.values);
  }
}

TEST(Properties, RoundTripsAndCompactness) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const Index rows = 1 + static_cast<Index>(rng.below(12)), cols = 1 + static_cast<Index>(rng.below(12));
    const BlockPartition part = random_partition(rng, rows, cols);
    const StructuredMask mask = random_mask(rng, rows, cols, part, 0.3 + 0.7 * rng.uniform());
    const MatrixXd m = random_on_mask(rng, mask);
    const auto b = encode(m, mask);
    ASSERT_TRUE(bitwise_equal(decode(b), m));
    EXPECT_EQ(deserialize(serialize(b)), b);

    const IndexOverhead o = index_overhead(b);
    EXPECT_LE(o.bspc_index_entries, o.csr_index_entries);
    bool has_2x2 = false;
    for (const auto& blk : b.blocks) has_2x2 |= blk.values.rows() >= 2 && blk.values.cols() >= 2;
    if (has_2x2) {
      EXPECT_LT(o.bspc_index_entries, o.csr_index_entries);
    }
  }
}

TEST(Properties, PermutationSoundness) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Index rows = 2 + static_cast<Index>(rng.below(10)), cols = 2 + static_cast<Index>(rng.below(10));
    const StructuredMask mask = random_mask(rng, rows, cols, random_partition(rng, rows, cols), 0.8);
    const auto plain = encode(random_on_mask(rng, mask), mask);
    const auto r = reorder(plain).matrix;
    ASSERT_TRUE(r.row_perm.has_value());
    EXPECT_TRUE(bitwise_equal(decode(r), decode(plain)));
    const MatrixXd permuted = decode_permuted(r), sorted = decode_permuted(plain);
    const MatrixXd full = decode(plain);
    for (std::size_t k = 0; k < r.row_perm->size(); ++k) {
      EXPECT_TRUE(bitwise_equal(MatrixXd(permuted.row(static_cast<Index>(k))),
                                MatrixXd(full.row((*r.row_perm)[k]))));
      EXPECT_TRUE(bitwise_equal(MatrixXd(sorted.row(static_cast<Index>(k))),
                                MatrixXd(full.row(plain.kept_rows[k]))));
    }
    EXPECT_EQ(deserialize(serialize(r)), r);
  }
}

class BspcFile : public ::testing::Test {
 protected:
  Bytes bytes = [] {
    Rng rng(8);
    auto b = reorder(encode(random_on_mask(rng, example_mask()), example_mask())).matrix;
    return serialize(b);
  }();
};

TEST_F(BspcFile, Layout) {
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "BSPC");
  std::uint32_t v;
  std::memcpy(&v, bytes.data() + 4, 4);
  EXPECT_EQ(v, kBspcVersion);
  // header 24 + rows 4+16 + perm 1+16 + per block 4+8 ids + 2x2 grid of 8-byte values
  EXPECT_EQ(bytes.size(), 24u + 20 + 17 + 4 * (12 + 32));
}

TEST_F(BspcFile, FlippedMagicFailsAtZero) {
  for (std::size_t k = 0; k < 4; ++k) {
    Bytes b = bytes;
    b[k] ^= 0x20;
    try {
      deserialize(b);
      FAIL();
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), ParseErrorKind::kBadMagic);
      EXPECT_EQ(e.offset(), 0u);
    }
  }
}

TEST_F(BspcFile, BadVersion) {
  Bytes b = bytes;
  b[4] = 9;
  try {
    deserialize(b);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::kBadVersion);
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST_F(BspcFile, EveryPrefixIsTruncation) {
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    try {
      deserialize(std::span(bytes.data(), n));
      FAIL() << "prefix " << n << " decoded";
    } catch (const ParseError& e) {
      // a 0-3 byte prefix cannot hold the magic
      if (n >= 4) {
        EXPECT_EQ(e.kind(), ParseErrorKind::kTruncated) << n;
      }
      EXPECT_LE(e.offset(), n);
    }
  }
}

TEST_F(BspcFile, TrailingBytesAndBadIdsAreCorrupt) {
  Bytes b = bytes;
  b.push_back(0);
  EXPECT_THROW(deserialize(b), ParseError);
  b = bytes;
  b[28] = 0xff;  // first kept-row id out of range
  try {
    deserialize(b);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::kCorrupt);
  }
}

TEST(BspcIo, FileRoundTripAndMissing) {
  Rng rng(9);
  const auto b = encode(random_on_mask(rng, example_mask()), example_mask());
  const auto path = std::filesystem::temp_directory_path() / "bspgru_test_roundtrip.bspc";
  save_bspc(path, b);
  EXPECT_EQ(load_bspc(path), b);
  std::filesystem::remove(path);
  EXPECT_THROW(load_bspc(path), IoError);
}

}  // namespace
}  // namespace bspgru
