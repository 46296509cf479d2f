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
#include <type_traits>

#include "bspgru/kernel/spmv.hpp"
#include "bspgru/prune/bsp_prune.hpp"
#include "bspgru/tensor/gru.hpp"

namespace bspgru {

template <typename Scalar>
struct SparseWeight {
  BspcMatrix<Scalar> matrix;  // reordered
  ExecutionSchedule schedule;
  PackedPanels<Scalar> panels;
};

/// GRU whose six input/recurrent matrices are stored in BSPC and executed
/// by the scheduled spmv; biases and readout stay dense.
template <typename Scalar>
struct SparseGru {
  std::array<SparseWeight<Scalar>, 6> weights;
  Vector<Scalar> b_z, b_r, b_h;
  Matrix<Scalar> readout_w;
  Vector<Scalar> readout_b;

  const SparseWeight<Scalar>& weight(WeightId id) const {
    return weights[static_cast<std::size_t>(id)];
  }
  Index input_dim() const { return weight(WeightId::kWz).matrix.cols; }
  Index hidden_dim() const { return weight(WeightId::kWz).matrix.rows; }
  Index num_classes() const { return readout_w.rows(); }

  void validate() const {
    const Index in = input_dim(), hid = hidden_dim();
    for (WeightId id : kWeightIds) {
      const auto& w = weight(id);
      w.matrix.validate();
      require(w.matrix.rows == hid && w.matrix.cols == (is_recurrent(id) ? hid : in),
              "SparseGru: weight " + std::string(weight_name(id)) + " has the wrong shape");
      check_schedule(w.matrix, w.schedule);
      require(w.panels.structure_key == w.schedule.structure_key &&
                  w.panels.values.size() == w.matrix.nnz(),
              "SparseGru: packed panels do not match weight " + std::string(weight_name(id)));
    }
    require(b_z.size() == hid && b_r.size() == hid && b_h.size() == hid,
            "SparseGru: gate biases must have length H");
    require(readout_w.cols() == hid && readout_b.size() == readout_w.rows(),
            "SparseGru: readout must be C x H");
  }
};

/// Reorders each matrix and plans its schedule.
template <typename Scalar>
SparseGru<Scalar> assemble_sparse_gru(std::array<BspcMatrix<Scalar>, 6> matrices,
                                      const GruParams<Scalar>& dense_rest,
                                      const ExecOptions& options = {}) {
  SparseGru<Scalar> out;
  for (WeightId id : kWeightIds) {
    auto r = reorder(matrices[static_cast<std::size_t>(id)]);
    auto& w = out.weights[static_cast<std::size_t>(id)];
    w.schedule = plan_loads(r.groups, r.matrix, options);
    w.panels = pack_panels(r.matrix, w.schedule);
    w.matrix = std::move(r.matrix);
  }
  out.b_z = dense_rest.b_z;
  out.b_r = dense_rest.b_r;
  out.b_h = dense_rest.b_h;
  out.readout_w = dense_rest.readout_w;
  out.readout_b = dense_rest.readout_b;
  out.validate();
  return out;
}

/// encode + reorder + plan_loads for every weight of a pruned model.
template <typename Scalar>
SparseGru<Scalar> compile_sparse_gru(const GruParams<Scalar>& pruned, const WeightMasks& masks,
                                     const ExecOptions& options = {}) {
  pruned.validate();
  std::array<BspcMatrix<Scalar>, 6> matrices;
  for (WeightId id : kWeightIds) {
    matrices[static_cast<std::size_t>(id)] =
        encode(pruned.weight(id), masks[static_cast<std::size_t>(id)]);
  }
  return assemble_sparse_gru(std::move(matrices), pruned, options);
}

/// Replans execution; panels only depend on the grouping and are kept.
template <typename Scalar>
SparseGru<Scalar> with_options(SparseGru<Scalar> model, const ExecOptions& options) {
  for (auto& w : model.weights) {
    w.schedule = plan_loads(w.schedule.groups, w.matrix, options);
  }
  return model;
}

/// The dense model the sparse one represents (pruned entries are zero).
template <typename Scalar>
GruParams<Scalar> dense_masked(const SparseGru<Scalar>& model) {
  GruParams<Scalar> p;
  for (WeightId id : kWeightIds) p.weight(id) = decode(model.weight(id).matrix);
  p.b_z = model.b_z;
  p.b_r = model.b_r;
  p.b_h = model.b_h;
  p.readout_w = model.readout_w;
  p.readout_b = model.readout_b;
  return p;
}

template <typename Scalar>
GruSequenceResult<Scalar> sparse_gru_forward(const SparseGru<Scalar>& model,
                                             const std::type_identity_t<Matrix<Scalar>>& xs,
                                             const std::type_identity_t<Vector<Scalar>>& h0,
                                             LoadCounter* counter = nullptr) {
  require(xs.rows() >= 1, "sparse_gru_forward: empty sequence");
  require(xs.cols() == model.input_dim(), "sparse_gru_forward: xs must be T x I");
  require(h0.size() == model.hidden_dim(), "sparse_gru_forward: h0 must have length H");
  require_finite(xs, "sparse_gru_forward input xs");
  require_finite(h0, "sparse_gru_forward input h0");
  auto mv = [&](WeightId id, const Vector<Scalar>& v) {
    const auto& w = model.weight(id);
    return spmv(w.panels, w.schedule, v, counter);
  };
  auto cell = [&](const Vector<Scalar>& x, const Vector<Scalar>& h) {
    return detail::gru_cell_with<Scalar>(mv, model.b_z, model.b_r, model.b_h, x, h);
  };
  return detail::run_sequence<Scalar>(cell, model.readout_w, model.readout_b, xs, h0);
}

}  // namespace bspgru
