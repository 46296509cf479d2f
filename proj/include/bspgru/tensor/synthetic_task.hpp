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
#include <string_view>
#include <vector>

#include "bspgru/core.hpp"

namespace bspgru {

struct Dataset {
  std::vector<MatrixXd> inputs;  // each T x I
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

/// Pattern-detection sequence classification. Every sample is Gaussian
/// noise of shape T x I with the pattern of its class added at one
/// uniformly chosen timestep; the label is that pattern's index.
struct SyntheticTask {
  Index seq_len = 20;
  Index input_dim = 16;
  Index num_classes = 4;
  double noise_std = 0.5;
  std::uint64_t seed = 0;
  MatrixXd class_patterns;  // C x I, entries +-1

  static SyntheticTask make(Index seq_len, Index input_dim, Index num_classes,
                            double noise_std, std::uint64_t seed);

  /// `n` samples from the named split; the same (seed, split, n) always
  /// yields a bit-identical dataset.
  Dataset sample(std::size_t n, std::string_view split) const;
};

}  // namespace bspgru
