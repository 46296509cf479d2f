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
#include <cstdint>
#include <tuple>
#include <vector>

#include "bspgru/bspc/bspc_matrix.hpp"

namespace bspgru {

/// Rows that read exactly the same input columns.
struct RowGroup {
  std::uint64_t pattern_key = 0;
  std::vector<Index> pattern;  // kept column ids, ascending
  std::vector<Index> rows;     // in execution order
  Index nnz_per_row = 0;
};

struct ExecOptions {
  Index tile_size = 64;     // pattern columns per inner pass
  Index unroll_factor = 4;  // rows advanced together, at most kMaxUnroll
  int workers = 1;
};

inline constexpr Index kMaxUnroll = 8;

/// Where a scheduled row's values live inside the BSPC grids.
struct RowSlot {
  Index row = 0;
  Index strip = 0;
  Index local = 0;  // position among the strip's kept rows
};

/// A nonempty block of a group's pattern: pattern[offset, offset + width)
/// are the kept columns of block `block`.
struct Segment {
  Index block = 0;
  Index width = 0;
  std::size_t offset = 0;
};

struct ExecutionSchedule {
  std::vector<RowGroup> groups;
  std::vector<std::vector<Index>> shared_loads;  // input columns loaded once per group
  Index tile_size = 64;
  Index unroll_factor = 4;
  int workers = 1;

  // Derived by plan_loads.
  std::vector<std::vector<RowSlot>> slots;             // parallel to groups[g].rows
  std::vector<std::vector<Segment>> segments;          // per group
  std::vector<std::size_t> load_offsets;               // prefix sums of shared_loads sizes
  std::vector<std::vector<std::vector<std::size_t>>> work;  // [worker][group] -> slot indices
  std::uint64_t structure_key = 0;
  Index rows = 0, cols = 0;
  std::size_t kept_rows = 0, index_entries = 0;

  std::size_t scheduled_loads() const { return load_offsets.empty() ? 0 : load_offsets.back(); }
  std::size_t naive_loads() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.rows.size() * static_cast<std::size_t>(g.nnz_per_row);
    return n;
  }
  /// Multiply-adds assigned to each worker.
  std::vector<std::size_t> worker_nnz() const;
};

inline std::uint64_t hash_ids(const std::vector<Index>& ids, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (Index id : ids) {
    auto v = static_cast<std::uint64_t>(id);
    for (int k = 0; k < 8; ++k) {
      h ^= (v >> (8 * k)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

/// Hash of the index structure (shape, partition, kept rows and columns);
/// values and row_perm are excluded.
template <typename Scalar>
std::uint64_t structure_fingerprint(const BspcMatrix<Scalar>& b) {
  std::uint64_t h = hash_ids({b.rows, b.cols, b.partition.num_r, b.partition.num_c});
  h = hash_ids(b.kept_rows, h);
  for (const auto& blk : b.blocks) h = hash_ids(blk.cols, hash_ids({-1}, h));
  return h;
}

/// Input columns read by a row of strip s: the concatenation of the
/// strip's block column lists, which is ascending.
template <typename Scalar>
std::vector<Index> strip_pattern(const BspcMatrix<Scalar>& b, Index s) {
  std::vector<Index> p;
  for (Index blk = 0; blk < b.partition.num_c; ++blk) {
    const auto& c = b.block(s, blk).cols;
    p.insert(p.end(), c.begin(), c.end());
  }
  return p;
}

template <typename Scalar>
struct Reordered {
  BspcMatrix<Scalar> matrix;  // row_perm set
  std::vector<RowGroup> groups;
};

/// Sorts kept rows by (pattern key, nnz, row id) and groups rows with an
/// identical pattern. Strips whose blocks chose the same columns merge into
/// one group.
template <typename Scalar>
Reordered<Scalar> reorder(const BspcMatrix<Scalar>& b) {
  b.validate();
  const Index strips = b.partition.num_r;
  std::vector<std::vector<Index>> patterns(static_cast<std::size_t>(strips));
  std::vector<std::uint64_t> keys(static_cast<std::size_t>(strips));
  for (Index s = 0; s < strips; ++s) {
    patterns[static_cast<std::size_t>(s)] = strip_pattern(b, s);
    keys[static_cast<std::size_t>(s)] = hash_ids(patterns[static_cast<std::size_t>(s)]);
  }

  struct Entry {
    std::uint64_t key;
    Index nnz;
    Index row;
    Index strip;
  };
  std::vector<Entry> entries;
  entries.reserve(b.kept_rows.size());
  for (Index row : b.kept_rows) {
    const Index s = b.partition.strip_of(row, b.rows);
    const auto& p = patterns[static_cast<std::size_t>(s)];
    entries.push_back({keys[static_cast<std::size_t>(s)], static_cast<Index>(p.size()), row, s});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return std::tie(x.key, x.nnz, x.row) < std::tie(y.key, y.nnz, y.row);
  });

  Reordered<Scalar> out{b, {}};
  std::vector<Index> perm;
  perm.reserve(entries.size());
  for (const Entry& e : entries) {
    const auto& p = patterns[static_cast<std::size_t>(e.strip)];
    if (out.groups.empty() || out.groups.back().pattern != p) {
      out.groups.push_back({e.key, p, {}, e.nnz});
    }
    out.groups.back().rows.push_back(e.row);
    perm.push_back(e.row);
  }
  out.matrix.row_perm = std::move(perm);
  return out;
}

/// Builds the execution schedule: one shared load per pattern column per
/// group, rows dealt round-robin to workers with a cursor that carries over
/// between groups.
template <typename Scalar>
ExecutionSchedule plan_loads(const std::vector<RowGroup>& groups, const BspcMatrix<Scalar>& b,
                             const ExecOptions& options = {}) {
  b.validate();
  require(options.workers >= 1, "plan_loads: workers must be >= 1");
  require(options.tile_size >= 1, "plan_loads: tile_size must be >= 1");
  require(options.unroll_factor >= 1 && options.unroll_factor <= kMaxUnroll,
          "plan_loads: unroll_factor must be in [1, 8]");

  ExecutionSchedule s;
  s.groups = groups;
  s.tile_size = options.tile_size;
  s.unroll_factor = options.unroll_factor;
  s.workers = options.workers;
  s.structure_key = structure_fingerprint(b);
  s.rows = b.rows;
  s.cols = b.cols;
  s.kept_rows = b.kept_rows.size();
  s.index_entries = b.index_entries();

  std::vector<Index> seen;
  s.load_offsets.push_back(0);
  s.work.assign(static_cast<std::size_t>(options.workers),
                std::vector<std::vector<std::size_t>>(groups.size()));
  std::size_t cursor = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const RowGroup& group = groups[g];
    require(static_cast<Index>(group.pattern.size()) == group.nnz_per_row,
            "plan_loads: group nnz does not match its pattern");
    s.shared_loads.push_back(group.pattern);
    std::vector<Segment> segs;
    s.load_offsets.push_back(s.load_offsets.back() + group.pattern.size());
    std::vector<RowSlot> slots;
    for (std::size_t k = 0; k < group.rows.size(); ++k) {
      const Index row = group.rows[k];
      require(std::binary_search(b.kept_rows.begin(), b.kept_rows.end(), row),
              "plan_loads: group row is not a kept row");
      const Index strip = b.partition.strip_of(row, b.rows);
      require(strip_pattern(b, strip) == group.pattern,
              "plan_loads: row pattern differs from its group pattern");
      if (k == 0) {
        std::size_t off = 0;
        for (Index blk = 0; blk < b.partition.num_c; ++blk) {
          const auto w = static_cast<Index>(b.block(strip, blk).cols.size());
          if (w > 0) segs.push_back({blk, w, off});
          off += static_cast<std::size_t>(w);
        }
      }
      const auto first = b.strip_rows(strip).first;
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(b.kept_rows.begin(), b.kept_rows.end(), row) - b.kept_rows.begin());
      slots.push_back({row, strip, static_cast<Index>(pos - first)});
      seen.push_back(row);
      s.work[cursor % static_cast<std::size_t>(options.workers)][g].push_back(k);
      ++cursor;
    }
    s.slots.push_back(std::move(slots));
    s.segments.push_back(std::move(segs));
  }
  std::sort(seen.begin(), seen.end());
  require(seen == b.kept_rows, "plan_loads: groups must cover every kept row exactly once");
  return s;
}

inline std::vector<std::size_t> ExecutionSchedule::worker_nnz() const {
  std::vector<std::size_t> out(work.size(), 0);
  for (std::size_t w = 0; w < work.size(); ++w)
    for (std::size_t g = 0; g < work[w].size(); ++g)
      out[w] += work[w][g].size() * static_cast<std::size_t>(groups[g].nnz_per_row);
  return out;
}

}  // namespace bspgru
