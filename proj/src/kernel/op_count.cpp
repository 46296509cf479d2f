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

#include "bspgru/kernel/op_count.hpp"

namespace bspgru {

OpCount count_ops(const WeightMasks& masks, Index seq_len) {
  require(seq_len >= 1, "count_ops: seq_len must be >= 1");
  const auto t = static_cast<std::uint64_t>(seq_len);
  std::uint64_t nnz = 0;
  for (const auto& m : masks) nnz += m.nnz();
  OpCount c;
  c.weight_ops = 2 * nnz * t;
  c.elementwise_ops =
      kElementwiseOpsPerHidden * static_cast<std::uint64_t>(masks[0].rows()) * t;
  c.total = c.weight_ops + c.elementwise_ops;
  return c;
}

OpCount count_ops_dense(Index input, Index hidden, Index seq_len) {
  require(input >= 1 && hidden >= 1 && seq_len >= 1, "count_ops_dense: dimensions must be >= 1");
  const auto t = static_cast<std::uint64_t>(seq_len);
  const auto in = static_cast<std::uint64_t>(input);
  const auto hid = static_cast<std::uint64_t>(hidden);
  OpCount c;
  c.weight_ops = 2 * 3 * hid * (in + hid) * t;
  c.elementwise_ops = kElementwiseOpsPerHidden * hid * t;
  c.total = c.weight_ops + c.elementwise_ops;
  return c;
}

}  // namespace bspgru
