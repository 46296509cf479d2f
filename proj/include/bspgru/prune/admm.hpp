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

#include <functional>

#include "bspgru/core.hpp"

namespace bspgru {

/// ADMM iterate for one weight tensor:
///   minimize f(W) + rho/2 ||W - Z + U||_F^2  s.t. Z in S.
struct AdmmState {
  MatrixXd w;
  MatrixXd z;  // feasible copy of W
  MatrixXd u;  // scaled dual
  double rho = 1e-2;

  /// Z = project(W), U = 0.
  template <typename Projection>
  static AdmmState start(MatrixXd w, double rho, Projection&& project) {
    AdmmState s;
    s.z = project(w);
    s.u = MatrixXd::Zero(w.rows(), w.cols());
    s.w = std::move(w);
    s.rho = rho;
    return s;
  }

  void validate() const;
};

using Projection = std::function<MatrixXd(const MatrixXd&)>;
using LossGradient = std::function<MatrixXd(const MatrixXd&)>;

/// Approximate W-minimisation: `steps` plain gradient steps of size `lr` on
/// f(W) + rho/2 ||W - Z + U||^2.
struct WUpdateOptions {
  double lr = 0.1;
  int steps = 1;
};

/// d/dW of the augmented-Lagrangian penalty: rho (W - Z + U).
MatrixXd admm_penalty_gradient(const AdmmState& state);

/// Z' = project(W + U).
void admm_z_update(AdmmState& state, const Projection& project);

/// U' = U + W - Z, evaluated elementwise as (U + W) - Z.
void admm_dual_update(AdmmState& state);

/// One full iteration: W-update, Z-update, dual update. Throws
/// DivergenceError if any iterate becomes non-finite.
AdmmState admm_step(AdmmState state, const Projection& project, const LossGradient& grad_loss,
                    const WUpdateOptions& options = {});

/// ||W - Z||_F
double primal_residual(const AdmmState& state);

}  // namespace bspgru
