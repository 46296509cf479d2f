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
#include <functional>
#include <optional>
#include <vector>

#include "bspgru/tensor/gru.hpp"
#include "bspgru/tensor/synthetic_task.hpp"

namespace bspgru {

/// -log softmax(logits)[label], computed with the max-shift.
double cross_entropy(const VectorXd& logits, int label);
VectorXd softmax(const VectorXd& logits);

struct LossAndGradients {
  double loss = 0.0;
  GruParamsd grads;
};

/// Backpropagation through time of the cross-entropy loss on the final
/// readout. Gradients have exactly the shapes of `params`.
LossAndGradients gru_backward(const GruParamsd& params, const MatrixXd& xs,
                              const VectorXd& h0, int label);

/// Lets a caller add terms to the mini-batch gradient before the optimizer
/// step (the ADMM penalty is injected this way).
using GradientHook = std::function<void(const GruParamsd& params, GruParamsd& grads)>;

struct TrainOptions {
  double lr = 0.01;
  int epochs = 30;
  int batch = 16;
  std::uint64_t seed = 0;
  double clip_norm = 5.0;  // global gradient-norm clip; <= 0 disables
  std::optional<ParamMask> mask;
  GradientHook hook;
};

struct TrainResult {
  GruParamsd params;
  std::vector<double> loss_curve;  // mean training loss per epoch
};

/// Mini-batch Adam over `data`. With a mask, masked entries are zeroed after
/// every update. Throws DivergenceError on a non-finite loss.
TrainResult train(const GruParamsd& params, const Dataset& data, const TrainOptions& options);

/// Fraction of samples whose argmax logit equals the label (h0 = 0).
double accuracy(const GruParamsd& params, const Dataset& data);
double mean_loss(const GruParamsd& params, const Dataset& data);
int predict(const VectorXd& logits);

void apply_mask(GruParamsd& params, const ParamMask& mask);
ParamMask full_mask(Index input, Index hidden, Index classes);

}  // namespace bspgru
