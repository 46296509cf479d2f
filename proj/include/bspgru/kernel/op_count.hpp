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

#include <cstdint>

#include "bspgru/prune/bsp_prune.hpp"

namespace bspgru {

/// Per-scalar primitives charged for the gate nonlinearities and gate
/// arithmetic of one GRU step, per hidden unit. Transcendentals count as one.
inline constexpr std::uint64_t kElementwiseOpsPerHidden = 13;

struct OpCount {
  std::uint64_t weight_ops = 0;       // 2 * nnz * T (multiply + add)
  std::uint64_t elementwise_ops = 0;  // 13 * H * T
  std::uint64_t total = 0;
};

OpCount count_ops(const WeightMasks& masks, Index seq_len);
OpCount count_ops_dense(Index input, Index hidden, Index seq_len);

}  // namespace bspgru
