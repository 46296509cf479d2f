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

#include "bspgru/prune/admm.hpp"

namespace bspgru {

void AdmmState::validate() const {
  require(z.rows() == w.rows() && z.cols() == w.cols() && u.rows() == w.rows() &&
              u.cols() == w.cols(),
          "AdmmState: W, Z, U must share one shape");
  require(rho > 0.0 && std::isfinite(rho), "AdmmState: rho must be positive");
}

MatrixXd admm_penalty_gradient(const AdmmState& state) {
  return state.rho * (state.w - state.z + state.u);
}

void admm_z_update(AdmmState& state, const Projection& project) {
  MatrixXd z = project(state.w + state.u);
  require(z.rows() == state.w.rows() && z.cols() == state.w.cols(),
          "admm_z_update: projection changed the shape");
  state.z = std::move(z);
}

void admm_dual_update(AdmmState& state) {
  MatrixXd u(state.u.rows(), state.u.cols());
  for (Index i = 0; i < u.size(); ++i) {
    u.data()[i] = (state.u.data()[i] + state.w.data()[i]) - state.z.data()[i];
  }
  state.u = std::move(u);
}

AdmmState admm_step(AdmmState state, const Projection& project, const LossGradient& grad_loss,
                    const WUpdateOptions& options) {
  state.validate();
  require(options.steps >= 0 && options.lr > 0.0, "admm_step: invalid W-update options");
  for (int k = 0; k < options.steps; ++k) {
    MatrixXd g = grad_loss(state.w);
    require(g.rows() == state.w.rows() && g.cols() == state.w.cols(),
            "admm_step: loss gradient has the wrong shape");
    g += admm_penalty_gradient(state);
    state.w -= options.lr * g;
  }
  if (!all_finite(state.w)) throw DivergenceError("admm_step: non-finite W");
  admm_z_update(state, project);
  admm_dual_update(state);
  if (!all_finite(state.z) || !all_finite(state.u)) {
    throw DivergenceError("admm_step: non-finite Z or U");
  }
  return state;
}

double primal_residual(const AdmmState& state) { return (state.w - state.z).norm(); }

}  // namespace bspgru
