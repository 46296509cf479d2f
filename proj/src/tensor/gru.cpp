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

#include "bspgru/tensor/gru.hpp"

namespace bspgru {

GruParamsd init_gru_params(Index input, Index hidden, Index classes, std::uint64_t seed) {
  require(input > 0 && hidden > 0 && classes > 0, "init_gru_params: dimensions must be positive");
  GruParamsd p = GruParamsd::zeros(input, hidden, classes);
  Rng rng(derive_seed(seed, "init"));
  auto fill = [&](MatrixXd& m, Index fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-bound, bound);
  };
  fill(p.w_z, input);
  fill(p.w_r, input);
  fill(p.w_h, input);
  fill(p.u_z, hidden);
  fill(p.u_r, hidden);
  fill(p.u_h, hidden);
  fill(p.readout_w, hidden);
  return p;
}

}  // namespace bspgru
