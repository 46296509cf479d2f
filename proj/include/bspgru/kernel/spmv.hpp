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

#include <array>
#include <cstdint>
#include <thread>
#include <type_traits>
#include <vector>

#include "bspgru/kernel/schedule.hpp"

namespace bspgru {

/// Counts reads of input-vector elements during an instrumented run.
struct LoadCounter {
  std::uint64_t loads = 0;
};

/// Reference executor: kept rows in ascending order, every (row, kept
/// column) pair reads x directly.
template <typename Scalar>
Vector<Scalar> spmv_naive(const BspcMatrix<Scalar>& b, const std::type_identity_t<Vector<Scalar>>& x,
                          LoadCounter* counter = nullptr) {
  require(x.size() == b.cols, "spmv_naive: x must have length cols");
  Vector<Scalar> y = Vector<Scalar>::Zero(b.rows);
  std::uint64_t loads = 0;
  for (Index s = 0; s < b.partition.num_r; ++s) {
    const auto [first, last] = b.strip_rows(s);
    for (std::size_t r = first; r < last; ++r) {
      Scalar acc = Scalar(0);
      for (Index blk = 0; blk < b.partition.num_c; ++blk) {
        const auto& block = b.block(s, blk);
        const auto kb = static_cast<Index>(block.cols.size());
        const Scalar* v = block.values.data() + static_cast<Index>(r - first) * kb;
        for (Index c = 0; c < kb; ++c) acc += v[c] * x[block.cols[static_cast<std::size_t>(c)]];
        loads += static_cast<std::uint64_t>(kb);
      }
      y[b.kept_rows[r]] = acc;
    }
  }
  if (counter) counter->loads += loads;
  return y;
}

namespace detail {

template <typename Scalar>
void run_group_rows(const BspcMatrix<Scalar>& b, const ExecutionSchedule& s, std::size_t g,
                    const std::vector<std::size_t>& slot_ids, const Scalar* xbuf, Scalar* y) {
  const RowSlot* slots = s.slots[g].data();
  const std::vector<Segment>& segs = s.segments[g];
  const auto* blocks = b.blocks.data();
  const Index num_c = b.partition.num_c;
  const auto unroll = static_cast<std::size_t>(s.unroll_factor);
  const Index tile = s.tile_size;
  for (std::size_t k0 = 0; k0 < slot_ids.size(); k0 += unroll) {
    const std::size_t n = std::min(unroll, slot_ids.size() - k0);
    std::array<Scalar, kMaxUnroll> acc{};
    std::array<const RowSlot*, kMaxUnroll> rs{};
    for (std::size_t u = 0; u < n; ++u) rs[u] = &slots[slot_ids[k0 + u]];
    for (const Segment& seg : segs) {
      const Index kb = seg.width;
      const Scalar* xs = xbuf + seg.offset;
      std::array<const Scalar*, kMaxUnroll> vals{};
      for (std::size_t u = 0; u < n; ++u)
        vals[u] = blocks[rs[u]->strip * num_c + seg.block].values.data() + rs[u]->local * kb;
      // Tiling only reorders which rows advance first; each row still adds
      // its terms in ascending column order.
      for (Index c0 = 0; c0 < kb; c0 += tile) {
        const Index c1 = std::min(kb, c0 + tile);
        for (std::size_t u = 0; u < n; ++u) {
          Scalar a = acc[u];
          const Scalar* v = vals[u];
          for (Index c = c0; c < c1; ++c) a += v[c] * xs[c];
          acc[u] = a;
        }
      }
    }
    for (std::size_t u = 0; u < n; ++u) y[rs[u]->row] = acc[u];
  }
}

template <typename Scalar>
void run_panel_rows(const Scalar* panel, Index width, const std::vector<RowSlot>& slots,
                    const std::vector<std::size_t>& slot_ids, Index unroll_factor, Index tile,
                    const Scalar* xbuf, Scalar* y) {
  const auto unroll = static_cast<std::size_t>(unroll_factor);
  for (std::size_t k0 = 0; k0 < slot_ids.size(); k0 += unroll) {
    const std::size_t n = std::min(unroll, slot_ids.size() - k0);
    std::array<Scalar, kMaxUnroll> acc{};
    for (Index c0 = 0; c0 < width; c0 += tile) {
      const Index c1 = std::min(width, c0 + tile);
      for (std::size_t u = 0; u < n; ++u) {
        const Scalar* v = panel + static_cast<Index>(slot_ids[k0 + u]) * width;
        Scalar a = acc[u];
        for (Index c = c0; c < c1; ++c) a += v[c] * xbuf[c];
        acc[u] = a;
      }
    }
    for (std::size_t u = 0; u < n; ++u) y[slots[slot_ids[k0 + u]].row] = acc[u];
  }
}

}  // namespace detail

/// The values of a reordered matrix copied into execution order: per group a
/// row-major (group rows) x (pattern) panel, so each scheduled row streams
/// its weights contiguously. Built once per (matrix, schedule).
template <typename Scalar>
struct PackedPanels {
  std::vector<Scalar> values;
  std::vector<std::size_t> offsets;  // per group, into values
  std::uint64_t structure_key = 0;
};

template <typename Scalar>
PackedPanels<Scalar> pack_panels(const BspcMatrix<Scalar>& b, const ExecutionSchedule& s) {
  PackedPanels<Scalar> p;
  p.structure_key = s.structure_key;
  for (std::size_t g = 0; g < s.groups.size(); ++g) {
    p.offsets.push_back(p.values.size());
    for (const RowSlot& slot : s.slots[g]) {
      for (const Segment& seg : s.segments[g]) {
        const auto& blk = b.block(slot.strip, seg.block);
        const Scalar* v = blk.values.data() + slot.local * seg.width;
        p.values.insert(p.values.end(), v, v + seg.width);
      }
    }
  }
  return p;
}

namespace detail {

/// Gathers x once per group, then runs `group_fn(worker, group, xbuf, y)`
/// for every (worker, group) with work.
template <typename Scalar, typename GroupFn>
Vector<Scalar> scheduled_run(Index rows, const ExecutionSchedule& s, const std::type_identity_t<Vector<Scalar>>& x,
                             LoadCounter* counter, GroupFn&& group_fn) {
  // Scratch reused across calls on the same thread.
  thread_local std::vector<Scalar> gathered;
  gathered.resize(s.scheduled_loads());
  for (std::size_t g = 0; g < s.shared_loads.size(); ++g) {
    Scalar* dst = gathered.data() + s.load_offsets[g];
    for (Index col : s.shared_loads[g]) *dst++ = x[col];
  }
  if (counter) counter->loads += s.scheduled_loads();

  Vector<Scalar> y = Vector<Scalar>::Zero(rows);
  const Scalar* xbuf = gathered.data();
  auto run_worker = [&](std::size_t w) {
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
      if (s.work[w][g].empty()) continue;
      group_fn(w, g, xbuf + s.load_offsets[g], y.data());
    }
  };
  if (s.work.size() <= 1) {
    if (!s.work.empty()) run_worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(s.work.size() - 1);
    for (std::size_t w = 1; w < s.work.size(); ++w) pool.emplace_back(run_worker, w);
    run_worker(0);
  }
  return y;
}

}  // namespace detail

/// Scheduled executor. Input elements are gathered once per group into a
/// shared buffer, then workers compute their rows. Each output row is owned
/// by one worker and accumulated in ascending column order, so results are
/// bitwise independent of the worker count and equal to spmv_naive.
template <typename Scalar>
Vector<Scalar> spmv(const BspcMatrix<Scalar>& b, const ExecutionSchedule& s,
                    const std::type_identity_t<Vector<Scalar>>& x, LoadCounter* counter = nullptr) {
  require(x.size() == b.cols, "spmv: x must have length cols");
  if (s.rows != b.rows || s.cols != b.cols || s.kept_rows != b.kept_rows.size() ||
      s.index_entries != b.index_entries()) {
    throw InvariantError("spmv: schedule was planned for a different matrix");
  }
  return detail::scheduled_run<Scalar>(b.rows, s, x, counter, [&](std::size_t w, std::size_t g, const Scalar* xbuf, Scalar* y) {
    detail::run_group_rows(b, s, g, s.work[w][g], xbuf, y);
  });
}

/// Same schedule and arithmetic as above, reading weights from packed panels.
template <typename Scalar>
Vector<Scalar> spmv(const PackedPanels<Scalar>& p, const ExecutionSchedule& s,
                    const std::type_identity_t<Vector<Scalar>>& x, LoadCounter* counter = nullptr) {
  require(x.size() == s.cols, "spmv: x must have length cols");
  if (p.structure_key != s.structure_key || p.offsets.size() != s.groups.size()) {
    throw InvariantError("spmv: panels were packed for a different schedule");
  }
  return detail::scheduled_run<Scalar>(s.rows, s, x, counter, [&](std::size_t w, std::size_t g, const Scalar* xbuf, Scalar* y) {
    detail::run_panel_rows(p.values.data() + p.offsets[g], s.groups[g].nnz_per_row, s.slots[g],
                           s.work[w][g], s.unroll_factor, s.tile_size, xbuf, y);
  });
}

/// Full consistency check between a matrix and a schedule (spmv itself only
/// checks sizes).
template <typename Scalar>
void check_schedule(const BspcMatrix<Scalar>& b, const ExecutionSchedule& s) {
  if (s.structure_key != structure_fingerprint(b)) {
    throw InvariantError("schedule/matrix mismatch: index structure differs");
  }
}

}  // namespace bspgru
