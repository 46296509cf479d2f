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

#include "bspgru/tensor/synthetic_task.hpp"

#include "bspgru/random.hpp"

namespace bspgru {

SyntheticTask SyntheticTask::make(Index seq_len, Index input_dim, Index num_classes,
                                  double noise_std, std::uint64_t seed) {
  require(seq_len >= 1 && input_dim >= 1 && num_classes >= 2,
          "SyntheticTask: need T >= 1, I >= 1, C >= 2");
  require(noise_std >= 0.0 && std::isfinite(noise_std), "SyntheticTask: noise_std must be >= 0");
  SyntheticTask task;
  task.seq_len = seq_len;
  task.input_dim = input_dim;
  task.num_classes = num_classes;
  task.noise_std = noise_std;
  task.seed = seed;
  // Patterns must be distinct or two classes would be indistinguishable.
  require(input_dim >= 63 || (Index{1} << input_dim) >= num_classes,
          "SyntheticTask: 2^I must be >= C for distinct class patterns");
  task.class_patterns.resize(num_classes, input_dim);
  Rng rng(derive_seed(seed, "patterns"));
  for (Index c = 0; c < num_classes; ++c) {
    bool duplicate = true;
    while (duplicate) {
      for (Index i = 0; i < input_dim; ++i)
        task.class_patterns(c, i) = (rng.next_u64() >> 63) ? 1.0 : -1.0;
      duplicate = false;
      for (Index prev = 0; prev < c && !duplicate; ++prev)
        duplicate = task.class_patterns.row(prev) == task.class_patterns.row(c);
    }
  }
  return task;
}

Dataset SyntheticTask::sample(std::size_t n, std::string_view split) const {
  require(class_patterns.rows() == num_classes && class_patterns.cols() == input_dim,
          "SyntheticTask: class_patterns must be C x I");
  Rng rng(derive_seed(seed, split));
  Dataset data;
  data.inputs.reserve(n);
  data.labels.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const int label = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_classes)));
    const Index at = static_cast<Index>(rng.below(static_cast<std::uint64_t>(seq_len)));
    MatrixXd xs(seq_len, input_dim);
    for (Index i = 0; i < xs.size(); ++i) xs.data()[i] = noise_std * rng.normal();
    xs.row(at) += class_patterns.row(label);
    data.inputs.push_back(std::move(xs));
    data.labels.push_back(label);
  }
  return data;
}

}  // namespace bspgru
