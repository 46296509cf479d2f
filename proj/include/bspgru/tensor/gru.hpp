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
#include <cmath>
#include <cstdint>
#include <string_view>
#include <type_traits>
#include <vector>

#include "bspgru/core.hpp"
#include "bspgru/random.hpp"

namespace bspgru {

/// The six input/recurrent matrices, in storage order. These are the
/// tensors the structured pruner operates on; biases and readout are never
/// pruned.
enum class WeightId : std::uint8_t { kWz = 0, kWr, kWh, kUz, kUr, kUh };

inline constexpr std::array<WeightId, 6> kWeightIds = {
    WeightId::kWz, WeightId::kWr, WeightId::kWh,
    WeightId::kUz, WeightId::kUr, WeightId::kUh};

constexpr std::string_view weight_name(WeightId id) {
  constexpr std::array<std::string_view, 6> names = {"Wz", "Wr", "Wh", "Uz", "Ur", "Uh"};
  return names[static_cast<std::size_t>(id)];
}

constexpr bool is_recurrent(WeightId id) { return static_cast<int>(id) >= 3; }

/// Single-layer GRU classifier.
///
///   z  = sigmoid(Wz x + Uz h + bz)
///   r  = sigmoid(Wr x + Ur h + br)
///   h~ = tanh(Wh x + Uh (r * h) + bh)
///   h' = z * h + (1 - z) * h~
///   logits = readout_w h_T + readout_b
///
/// Scalar is any Eigen scalar; bool instantiations are used as masks.
template <typename Scalar>
struct GruParams {
  Matrix<Scalar> w_z, w_r, w_h;  // H x I
  Matrix<Scalar> u_z, u_r, u_h;  // H x H
  Vector<Scalar> b_z, b_r, b_h;  // H
  Matrix<Scalar> readout_w;      // C x H
  Vector<Scalar> readout_b;      // C

  Index input_dim() const { return w_z.cols(); }
  Index hidden_dim() const { return w_z.rows(); }
  Index num_classes() const { return readout_w.rows(); }

  static GruParams filled(Index input, Index hidden, Index classes, Scalar value) {
    GruParams p;
    for (auto* w : {&p.w_z, &p.w_r, &p.w_h}) *w = Matrix<Scalar>::Constant(hidden, input, value);
    for (auto* u : {&p.u_z, &p.u_r, &p.u_h}) *u = Matrix<Scalar>::Constant(hidden, hidden, value);
    for (auto* b : {&p.b_z, &p.b_r, &p.b_h}) *b = Vector<Scalar>::Constant(hidden, value);
    p.readout_w = Matrix<Scalar>::Constant(classes, hidden, value);
    p.readout_b = Vector<Scalar>::Constant(classes, value);
    return p;
  }

  static GruParams zeros(Index input, Index hidden, Index classes) {
    return filled(input, hidden, classes, Scalar(0));
  }

  Matrix<Scalar>& weight(WeightId id) { return *weight_ptrs()[static_cast<std::size_t>(id)]; }
  const Matrix<Scalar>& weight(WeightId id) const {
    return *const_cast<GruParams*>(this)->weight_ptrs()[static_cast<std::size_t>(id)];
  }

  /// Visits every tensor in field order (w_z .. u_h, b_z .. b_h, readout_w,
  /// readout_b). The callback receives (name, tensor&).
  template <typename F>
  void for_each_tensor(F&& f) {
    visit_tensors(*this, f);
  }
  template <typename F>
  void for_each_tensor(F&& f) const {
    visit_tensors(*this, f);
  }

  /// 3H(I+H+1) + C(H+1)
  std::size_t parameter_count() const {
    std::size_t n = 0;
    for_each_tensor([&](std::string_view, const auto& t) { n += static_cast<std::size_t>(t.size()); });
    return n;
  }

  void validate() const {
    const Index in = input_dim(), hid = hidden_dim(), cls = num_classes();
    require(in > 0 && hid > 0 && cls > 0, "GruParams: dimensions must be positive");
    for (const auto* w : {&w_z, &w_r, &w_h})
      require(w->rows() == hid && w->cols() == in, "GruParams: input weights must be H x I");
    for (const auto* u : {&u_z, &u_r, &u_h})
      require(u->rows() == hid && u->cols() == hid, "GruParams: recurrent weights must be H x H");
    for (const auto* b : {&b_z, &b_r, &b_h})
      require(b->size() == hid, "GruParams: gate biases must have length H");
    require(readout_w.cols() == hid, "GruParams: readout must be C x H");
    require(readout_b.size() == cls, "GruParams: readout bias must have length C");
  }

  template <typename Other>
  GruParams<Other> cast() const {
    GruParams<Other> out;
    out.w_z = w_z.template cast<Other>();
    out.w_r = w_r.template cast<Other>();
    out.w_h = w_h.template cast<Other>();
    out.u_z = u_z.template cast<Other>();
    out.u_r = u_r.template cast<Other>();
    out.u_h = u_h.template cast<Other>();
    out.b_z = b_z.template cast<Other>();
    out.b_r = b_r.template cast<Other>();
    out.b_h = b_h.template cast<Other>();
    out.readout_w = readout_w.template cast<Other>();
    out.readout_b = readout_b.template cast<Other>();
    return out;
  }

  bool operator==(const GruParams& other) const {
    bool same = true;
    auto lhs = flatten_refs();
    auto rhs = other.flatten_refs();
    for (std::size_t i = 0; i < lhs.size() && same; ++i) {
      same = lhs[i].first == rhs[i].first &&
             std::equal(lhs[i].second, lhs[i].second + lhs[i].first, rhs[i].second);
    }
    return same;
  }

 private:
  std::array<Matrix<Scalar>*, 6> weight_ptrs() { return {&w_z, &w_r, &w_h, &u_z, &u_r, &u_h}; }

  std::array<std::pair<Index, const Scalar*>, 11> flatten_refs() const {
    std::array<std::pair<Index, const Scalar*>, 11> out;
    std::size_t i = 0;
    for_each_tensor([&](std::string_view, const auto& t) {
      out[i++] = {t.size(), t.data()};
    });
    return out;
  }

  template <typename Self, typename F>
  static void visit_tensors(Self& self, F& f) {
    f("w_z", self.w_z);
    f("w_r", self.w_r);
    f("w_h", self.w_h);
    f("u_z", self.u_z);
    f("u_r", self.u_r);
    f("u_h", self.u_h);
    f("b_z", self.b_z);
    f("b_r", self.b_r);
    f("b_h", self.b_h);
    f("readout_w", self.readout_w);
    f("readout_b", self.readout_b);
  }
};

using GruParamsd = GruParams<double>;
/// Per-parameter keep mask; false entries are held at zero by training.
using ParamMask = GruParams<bool>;

inline std::size_t gru_parameter_count(std::size_t in, std::size_t hid, std::size_t cls) {
  return 3 * hid * (in + hid + 1) + cls * (hid + 1);
}

template <typename Scalar>
struct GruState {
  Vector<Scalar> z;        // update gate
  Vector<Scalar> r;        // reset gate
  Vector<Scalar> h_tilde;  // candidate state
  Vector<Scalar> h;        // output
};

template <typename Scalar>
struct GruSequenceResult {
  std::vector<GruState<Scalar>> states;
  Vector<Scalar> logits;
};

template <typename Scalar>
Scalar sigmoid(Scalar a) {
  if (a >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-a));
  const Scalar e = std::exp(a);
  return e / (Scalar(1) + e);
}

namespace detail {

/// One GRU step given a product oracle `mv(id, v)` returning weight(id)*v.
/// Shared by the dense and the BSPC inference paths so both evaluate the
/// same expression tree.
template <typename Scalar, typename MatVec>
GruState<Scalar> gru_cell_with(MatVec&& mv, const Vector<Scalar>& b_z,
                               const Vector<Scalar>& b_r, const Vector<Scalar>& b_h,
                               const Vector<Scalar>& x, const Vector<Scalar>& h_prev) {
  const Index hid = h_prev.size();
  const Vector<Scalar> wz_x = mv(WeightId::kWz, x);
  const Vector<Scalar> uz_h = mv(WeightId::kUz, h_prev);
  const Vector<Scalar> wr_x = mv(WeightId::kWr, x);
  const Vector<Scalar> ur_h = mv(WeightId::kUr, h_prev);

  GruState<Scalar> s;
  s.z.resize(hid);
  s.r.resize(hid);
  for (Index i = 0; i < hid; ++i) {
    s.z[i] = sigmoid<Scalar>(wz_x[i] + uz_h[i] + b_z[i]);
    s.r[i] = sigmoid<Scalar>(wr_x[i] + ur_h[i] + b_r[i]);
  }

  Vector<Scalar> gated(hid);
  for (Index i = 0; i < hid; ++i) gated[i] = s.r[i] * h_prev[i];
  const Vector<Scalar> wh_x = mv(WeightId::kWh, x);
  const Vector<Scalar> uh_g = mv(WeightId::kUh, gated);

  s.h_tilde.resize(hid);
  s.h.resize(hid);
  for (Index i = 0; i < hid; ++i) {
    s.h_tilde[i] = std::tanh(wh_x[i] + uh_g[i] + b_h[i]);
    s.h[i] = s.z[i] * h_prev[i] + (Scalar(1) - s.z[i]) * s.h_tilde[i];
  }
  return s;
}

template <typename Scalar, typename CellFn>
GruSequenceResult<Scalar> run_sequence(CellFn&& cell, const Matrix<Scalar>& readout_w,
                                       const Vector<Scalar>& readout_b,
                                       const Matrix<Scalar>& xs, const Vector<Scalar>& h0) {
  require(xs.rows() >= 1, "gru_forward_sequence: empty sequence");
  GruSequenceResult<Scalar> out;
  out.states.reserve(static_cast<std::size_t>(xs.rows()));
  Vector<Scalar> h = h0;
  for (Index t = 0; t < xs.rows(); ++t) {
    const Vector<Scalar> x = xs.row(t).transpose();
    out.states.push_back(cell(x, h));
    h = out.states.back().h;
  }
  const Vector<Scalar> rh = ordered_matvec(readout_w, h);
  out.logits.resize(readout_b.size());
  for (Index c = 0; c < readout_b.size(); ++c) out.logits[c] = rh[c] + readout_b[c];
  return out;
}

}  // namespace detail

template <typename Scalar>
GruState<Scalar> gru_cell_forward(const GruParams<Scalar>& params,
                                  const std::type_identity_t<Vector<Scalar>>& x,
                                  const std::type_identity_t<Vector<Scalar>>& h_prev) {
  params.validate();
  require(x.size() == params.input_dim(), "gru_cell_forward: x must have length I");
  require(h_prev.size() == params.hidden_dim(), "gru_cell_forward: h_prev must have length H");
  require_finite(x, "gru_cell_forward input x");
  require_finite(h_prev, "gru_cell_forward input h_prev");
  return detail::gru_cell_with<Scalar>(
      [&](WeightId id, const Vector<Scalar>& v) { return ordered_matvec(params.weight(id), v); },
      params.b_z, params.b_r, params.b_h, x, h_prev);
}

/// Unrolls the cell over the rows of `xs` (T x I) starting from `h0` and
/// applies the readout to the final hidden state.
template <typename Scalar>
GruSequenceResult<Scalar> gru_forward_sequence(const GruParams<Scalar>& params,
                                               const std::type_identity_t<Matrix<Scalar>>& xs,
                                               const std::type_identity_t<Vector<Scalar>>& h0) {
  params.validate();
  require(xs.rows() >= 1, "gru_forward_sequence: empty sequence");
  require(xs.cols() == params.input_dim(), "gru_forward_sequence: xs must be T x I");
  require(h0.size() == params.hidden_dim(), "gru_forward_sequence: h0 must have length H");
  require_finite(xs, "gru_forward_sequence input xs");
  require_finite(h0, "gru_forward_sequence input h0");
  auto cell = [&](const Vector<Scalar>& x, const Vector<Scalar>& h) {
    return detail::gru_cell_with<Scalar>(
        [&](WeightId id, const Vector<Scalar>& v) { return ordered_matvec(params.weight(id), v); },
        params.b_z, params.b_r, params.b_h, x, h);
  };
  return detail::run_sequence<Scalar>(cell, params.readout_w, params.readout_b, xs, h0);
}

/// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights, zero biases.
GruParamsd init_gru_params(Index input, Index hidden, Index classes, std::uint64_t seed);

}  // namespace bspgru
