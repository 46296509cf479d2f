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

#include "bspgru/tensor/train.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <span>
#include <utility>

#include "bspgru/random.hpp"

namespace bspgru {
namespace {

template <typename Scalar>
std::array<std::span<Scalar>, 11> tensor_spans(GruParams<Scalar>& p) {
  std::array<std::span<Scalar>, 11> out;
  std::size_t i = 0;
  p.for_each_tensor([&](std::string_view, auto& t) {
    out[i++] = std::span<Scalar>(t.data(), static_cast<std::size_t>(t.size()));
  });
  return out;
}

template <typename Scalar>
std::array<std::span<const Scalar>, 11> tensor_spans(const GruParams<Scalar>& p) {
  std::array<std::span<const Scalar>, 11> out;
  std::size_t i = 0;
  p.for_each_tensor([&](std::string_view, const auto& t) {
    out[i++] = std::span<const Scalar>(t.data(), static_cast<std::size_t>(t.size()));
  });
  return out;
}

void add_into(GruParamsd& acc, const GruParamsd& g) {
  auto a = tensor_spans(acc);
  auto b = tensor_spans(g);
  for (std::size_t t = 0; t < a.size(); ++t)
    for (std::size_t i = 0; i < a[t].size(); ++i) a[t][i] += b[t][i];
}

bool masks_conform(const ParamMask& mask, const GruParamsd& params) {
  auto m = tensor_spans(mask);
  auto p = tensor_spans(params);
  for (std::size_t t = 0; t < m.size(); ++t)
    if (m[t].size() != p[t].size()) return false;
  return mask.input_dim() == params.input_dim() && mask.hidden_dim() == params.hidden_dim() &&
         mask.num_classes() == params.num_classes();
}

}  // namespace

VectorXd softmax(const VectorXd& logits) {
  const double shift = logits.maxCoeff();
  VectorXd e = (logits.array() - shift).exp().matrix();
  return e / e.sum();
}

double cross_entropy(const VectorXd& logits, int label) {
  require(label >= 0 && label < logits.size(), "cross_entropy: label out of range");
  const double shift = logits.maxCoeff();
  const double log_sum = std::log((logits.array() - shift).exp().sum()) + shift;
  return log_sum - logits[label];
}

LossAndGradients gru_backward(const GruParamsd& params, const MatrixXd& xs, const VectorXd& h0,
                              int label) {
  const auto fwd = gru_forward_sequence(params, xs, h0);
  require(label >= 0 && label < params.num_classes(), "gru_backward: label out of range");

  LossAndGradients out;
  out.loss = cross_entropy(fwd.logits, label);
  GruParamsd& g = out.grads;
  g = GruParamsd::zeros(params.input_dim(), params.hidden_dim(), params.num_classes());

  VectorXd dlogits = softmax(fwd.logits);
  dlogits[label] -= 1.0;
  const VectorXd& h_last = fwd.states.back().h;
  g.readout_w = dlogits * h_last.transpose();
  g.readout_b = dlogits;
  VectorXd dh = params.readout_w.transpose() * dlogits;

  for (Index t = xs.rows() - 1; t >= 0; --t) {
    const auto& s = fwd.states[static_cast<std::size_t>(t)];
    const VectorXd& h_prev = t > 0 ? fwd.states[static_cast<std::size_t>(t - 1)].h : h0;
    const VectorXd x = xs.row(t).transpose();

    // h = z*h_prev + (1-z)*h~
    const VectorXd dz = dh.cwiseProduct(h_prev - s.h_tilde);
    const VectorXd dh_tilde = dh.array() * (1.0 - s.z.array());
    VectorXd dh_prev = dh.cwiseProduct(s.z);

    // h~ = tanh(Wh x + Uh (r*h_prev) + bh)
    const VectorXd da_h = dh_tilde.array() * (1.0 - s.h_tilde.array().square());
    const VectorXd gated = s.r.cwiseProduct(h_prev);
    g.w_h += da_h * x.transpose();
    g.u_h += da_h * gated.transpose();
    g.b_h += da_h;
    const VectorXd dgated = params.u_h.transpose() * da_h;
    const VectorXd dr = dgated.cwiseProduct(h_prev);
    dh_prev += dgated.cwiseProduct(s.r);

    const VectorXd da_z = dz.array() * s.z.array() * (1.0 - s.z.array());
    g.w_z += da_z * x.transpose();
    g.u_z += da_z * h_prev.transpose();
    g.b_z += da_z;
    dh_prev += params.u_z.transpose() * da_z;

    const VectorXd da_r = dr.array() * s.r.array() * (1.0 - s.r.array());
    g.w_r += da_r * x.transpose();
    g.u_r += da_r * h_prev.transpose();
    g.b_r += da_r;
    dh_prev += params.u_r.transpose() * da_r;

    dh = dh_prev;
  }
  return out;
}

void apply_mask(GruParamsd& params, const ParamMask& mask) {
  require(masks_conform(mask, params), "apply_mask: mask does not conform to parameters");
  auto p = tensor_spans(params);
  auto m = tensor_spans(mask);
  for (std::size_t t = 0; t < p.size(); ++t)
    for (std::size_t i = 0; i < p[t].size(); ++i)
      if (!m[t][i]) p[t][i] = 0.0;
}

ParamMask full_mask(Index input, Index hidden, Index classes) {
  return ParamMask::filled(input, hidden, classes, true);
}

TrainResult train(const GruParamsd& params, const Dataset& data, const TrainOptions& options) {
  params.validate();
  require(options.epochs >= 0, "train: epochs must be >= 0");
  require(options.batch >= 1, "train: batch must be >= 1");
  require(options.lr > 0.0 && std::isfinite(options.lr), "train: lr must be positive");
  require(options.epochs == 0 || data.size() > 0, "train: empty dataset");
  if (options.mask) {
    require(masks_conform(*options.mask, params), "train: mask does not conform to parameters");
  }

  TrainResult result{params, {}};
  if (options.epochs == 0) return result;

  const Index in = params.input_dim(), hid = params.hidden_dim(), cls = params.num_classes();
  GruParamsd first = GruParamsd::zeros(in, hid, cls);
  GruParamsd second = first;
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  long step = 0;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(options.seed, "shuffle"));
  const VectorXd h0 = VectorXd::Zero(hid);
  const auto batch = static_cast<std::size_t>(options.batch);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      GruParamsd grads = GruParamsd::zeros(in, hid, cls);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t idx = order[k];
        auto lg = gru_backward(result.params, data.inputs[idx], h0, data.labels[idx]);
        if (!std::isfinite(lg.loss)) throw DivergenceError("non-finite training loss", epoch);
        epoch_loss += lg.loss;
        add_into(grads, lg.grads);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      auto gs = tensor_spans(grads);
      for (auto& s : gs)
        for (auto& v : s) v *= scale;

      if (options.hook) options.hook(result.params, grads);

      if (options.clip_norm > 0.0) {
        double sq = 0.0;
        for (const auto& s : gs)
          for (double v : s) sq += v * v;
        const double norm = std::sqrt(sq);
        if (!std::isfinite(norm)) throw DivergenceError("non-finite gradient", epoch);
        if (norm > options.clip_norm) {
          const double c = options.clip_norm / norm;
          for (auto& s : gs)
            for (auto& v : s) v *= c;
        }
      }

      ++step;
      const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      auto ps = tensor_spans(result.params);
      auto ms = tensor_spans(first);
      auto vs = tensor_spans(second);
      for (std::size_t t = 0; t < ps.size(); ++t) {
        for (std::size_t i = 0; i < ps[t].size(); ++i) {
          const double gi = gs[t][i];
          ms[t][i] = kBeta1 * ms[t][i] + (1.0 - kBeta1) * gi;
          vs[t][i] = kBeta2 * vs[t][i] + (1.0 - kBeta2) * gi * gi;
          const double m_hat = ms[t][i] / bc1;
          const double v_hat = vs[t][i] / bc2;
          ps[t][i] -= options.lr * m_hat / (std::sqrt(v_hat) + kEps);
        }
      }
      if (options.mask) apply_mask(result.params, *options.mask);
    }
    const double mean = epoch_loss / static_cast<double>(data.size());
    bool finite = std::isfinite(mean);
    for (const auto& span : tensor_spans(std::as_const(result.params)))
      finite = finite && std::all_of(span.begin(), span.end(), [](double v) { return std::isfinite(v); });
    if (!finite) {
      throw DivergenceError("non-finite training loss", epoch);
    }
    result.loss_curve.push_back(mean);
  }
  return result;
}

int predict(const VectorXd& logits) {
  Index best = 0;
  for (Index c = 1; c < logits.size(); ++c)
    if (logits[c] > logits[best]) best = c;
  return static_cast<int>(best);
}

double accuracy(const GruParamsd& params, const Dataset& data) {
  require(data.size() > 0, "accuracy: empty dataset");
  const VectorXd h0 = VectorXd::Zero(params.hidden_dim());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto fwd = gru_forward_sequence(params, data.inputs[i], h0);
    if (predict(fwd.logits) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double mean_loss(const GruParamsd& params, const Dataset& data) {
  require(data.size() > 0, "mean_loss: empty dataset");
  const VectorXd h0 = VectorXd::Zero(params.hidden_dim());
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += cross_entropy(gru_forward_sequence(params, data.inputs[i], h0).logits,
                           data.labels[i]);
  }
  return total / static_cast<double>(data.size());
}

}  // namespace bspgru
