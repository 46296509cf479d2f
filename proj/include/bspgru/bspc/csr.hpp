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

#include <vector>

#include "bspgru/bspc/bspc_matrix.hpp"

namespace bspgru {

template <typename Scalar>
struct CsrMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> row_ptr;  // rows + 1
  std::vector<Index> col_idx;  // nnz
  std::vector<Scalar> values;  // nnz

  std::size_t nnz() const { return col_idx.size(); }
  std::size_t index_entries() const { return row_ptr.size() + col_idx.size(); }
};

/// CSR over the nonzeros of a dense matrix.
template <typename Scalar>
CsrMatrix<Scalar> to_csr(const Matrix<Scalar>& m) {
  CsrMatrix<Scalar> out{m.rows(), m.cols(), {}, {}, {}};
  out.row_ptr.reserve(static_cast<std::size_t>(m.rows() + 1));
  out.row_ptr.push_back(0);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != Scalar(0)) {
        out.col_idx.push_back(j);
        out.values.push_back(m(i, j));
      }
    }
    out.row_ptr.push_back(static_cast<Index>(out.col_idx.size()));
  }
  return out;
}

/// CSR over the stored support of a BSPC matrix (explicit zeros kept), so
/// that both formats describe the same entries.
template <typename Scalar>
CsrMatrix<Scalar> to_csr(const BspcMatrix<Scalar>& bspc) {
  bspc.validate();
  CsrMatrix<Scalar> out{bspc.rows, bspc.cols, {}, {}, {}};
  out.row_ptr.assign(static_cast<std::size_t>(bspc.rows + 1), 0);
  std::vector<std::vector<std::pair<Index, Scalar>>> per_row(static_cast<std::size_t>(bspc.rows));
  for (Index s = 0; s < bspc.partition.num_r; ++s) {
    const auto [first, last] = bspc.strip_rows(s);
    for (Index b = 0; b < bspc.partition.num_c; ++b) {
      const auto& blk = bspc.block(s, b);
      for (std::size_t r = first; r < last; ++r)
        for (std::size_t c = 0; c < blk.cols.size(); ++c)
          per_row[static_cast<std::size_t>(bspc.kept_rows[r])].emplace_back(
              blk.cols[c], blk.values(static_cast<Index>(r - first), static_cast<Index>(c)));
    }
  }
  for (Index i = 0; i < bspc.rows; ++i) {
    for (const auto& [j, v] : per_row[static_cast<std::size_t>(i)]) {
      out.col_idx.push_back(j);
      out.values.push_back(v);
    }
    out.row_ptr[static_cast<std::size_t>(i + 1)] = static_cast<Index>(out.col_idx.size());
  }
  return out;
}

struct IndexOverhead {
  std::size_t bspc_index_entries = 0;
  std::size_t csr_index_entries = 0;
  bool operator==(const IndexOverhead&) const = default;
};

/// Index integers needed by BSPC versus CSR for the same stored entries.
template <typename Scalar>
IndexOverhead index_overhead(const BspcMatrix<Scalar>& bspc) {
  return {bspc.index_entries(), bspc.nnz() + static_cast<std::size_t>(bspc.rows) + 1};
}

}  // namespace bspgru
