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

#include "bspgru/prune/bsp_prune.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace bspgru {
namespace {

constexpr std::size_t slot(WeightId id) { return static_cast<std::size_t>(id); }

struct PhaseState {
  AdmmState admm;
  BlockColumnSelection cols;   // step 1 only
  std::vector<Index> rows;     // step 2 only
};

std::array<SparsityConstraint, 6> constraints_for(const GruParamsd& params,
                                                  const WeightPartitions& parts,
                                                  const PruneRates& rates) {
  std::array<SparsityConstraint, 6> out;
  for (WeightId id : kWeightIds) {
    const MatrixXd& w = params.weight(id);
    out[slot(id)] = constraint_from_rates(w.rows(), w.cols(), parts[slot(id)], rates.col_rate,
                                          rates.row_rate);
  }
  return out;
}

BlockColumnSelection full_selection(Index rows, Index cols, const BlockPartition& part) {
  const StructuredMask full = StructuredMask::full(rows, cols, part);
  return {rows, cols, part, full.all_block_cols()};
}

std::vector<Index> all_rows(Index rows) {
  std::vector<Index> ids(static_cast<std::size_t>(rows));
  std::iota(ids.begin(), ids.end(), Index{0});
  return ids;
}

/// Runs `iterations` ADMM rounds over all six matrices at once. The W-update
/// is one training epoch with the penalty gradient added; `z_update`
/// projects W + U and records the chosen support.
template <typename ZUpdate>
void run_admm_phase(GruParamsd& current, std::array<PhaseState, 6>& phase, int iterations,
                    const std::string& tag, const BspConfig& config,
                    const std::optional<ParamMask>& mask, const Dataset& train_data,
                    std::vector<double>& curve, ZUpdate&& z_update) {
  for (int it = 0; it < iterations; ++it) {
    TrainOptions opt;
    opt.lr = config.lr;
    opt.batch = config.batch;
    opt.epochs = 1;
    opt.seed = derive_seed(config.seed, fmt::format("{}-{}", tag, it));
    opt.mask = mask;
    opt.hook = [&phase](const GruParamsd& p, GruParamsd& g) {
      for (WeightId id : kWeightIds) {
        AdmmState& s = phase[slot(id)].admm;
        g.weight(id) += s.rho * (p.weight(id) - s.z + s.u);
      }
    };
    TrainResult tr;
    try {
      tr = train(current, train_data, opt);
    } catch (const DivergenceError&) {
      throw DivergenceError(fmt::format("ADMM phase {} diverged", tag), it);
    }
    current = std::move(tr.params);
    curve.insert(curve.end(), tr.loss_curve.begin(), tr.loss_curve.end());
    for (WeightId id : kWeightIds) {
      PhaseState& ps = phase[slot(id)];
      ps.admm.w = current.weight(id);
      z_update(id, ps);
      admm_dual_update(ps.admm);
      if (!all_finite(ps.admm.u)) throw DivergenceError(fmt::format("ADMM phase {} diverged", tag), it);
    }
  }
}

}  // namespace

BspResult bsp_prune(const GruParamsd& params, const WeightPartitions& parts,
                    const PruneRates& rates, const BspConfig& config, const Dataset& train_data,
                    const Dataset& test_data) {
  params.validate();
  require(config.admm_epochs >= 0 && config.retrain_epochs >= 0,
          "bsp_prune: epoch counts must be >= 0");
  require(config.rho > 0.0 && std::isfinite(config.rho), "bsp_prune: rho must be positive");
  require(test_data.size() > 0, "bsp_prune: empty evaluation set");
  const auto constraints = constraints_for(params, parts, rates);

  BspResult result;
  PruneReport& report = result.report;
  report.accuracy_before = accuracy(params, test_data);
  GruParamsd current = params;
  const Index classes = params.num_classes();

  // Step 1: column pruning inside every block of every strip.
  std::array<PhaseState, 6> phase;
  bool columns_trivial = true;
  for (WeightId id : kWeightIds) {
    const MatrixXd& w = current.weight(id);
    const BlockPartition& part = parts[slot(id)];
    const auto& keep = constraints[slot(id)].col_keep;
    for (Index b = 0; b < part.num_c; ++b)
      columns_trivial = columns_trivial && keep[static_cast<std::size_t>(b)] == part.block(b, w.cols()).size();
  }
  std::array<BlockColumnSelection, 6> column_choice;
  if (columns_trivial) {
    for (WeightId id : kWeightIds) {
      const MatrixXd& w = current.weight(id);
      column_choice[slot(id)] = full_selection(w.rows(), w.cols(), parts[slot(id)]);
    }
  } else {
    auto z_update = [&](WeightId id, PhaseState& ps) {
      const MatrixXd target = ps.admm.w + ps.admm.u;
      ps.cols = select_block_columns(target, parts[slot(id)], constraints[slot(id)].col_keep);
      ps.admm.z = apply_selection(target, ps.cols);
    };
    for (WeightId id : kWeightIds) {
      PhaseState& ps = phase[slot(id)];
      ps.admm.w = current.weight(id);
      ps.admm.u = MatrixXd::Zero(ps.admm.w.rows(), ps.admm.w.cols());
      ps.admm.rho = config.rho;
      z_update(id, ps);
    }
    run_admm_phase(current, phase, config.admm_epochs, "admm-columns", config, std::nullopt,
                   train_data, report.loss_curve, z_update);
    for (WeightId id : kWeightIds) {
      current.weight(id) = phase[slot(id)].admm.z;
      column_choice[slot(id)] = phase[slot(id)].cols;
    }
  }

  WeightMasks masks;
  for (WeightId id : kWeightIds) {
    masks[slot(id)] = StructuredMask::from_selection(column_choice[slot(id)],
                                                     all_rows(current.weight(id).rows()));
  }

  // Step 2: row pruning over each whole column-pruned matrix.
  bool rows_trivial = true;
  for (WeightId id : kWeightIds)
    rows_trivial = rows_trivial && constraints[slot(id)].row_keep == current.weight(id).rows();
  if (!rows_trivial) {
    const ParamMask column_mask = to_param_mask(masks, classes);
    auto z_update = [&](WeightId id, PhaseState& ps) {
      const MatrixXd target = ps.admm.w + ps.admm.u;
      ps.rows = select_rows(target, constraints[slot(id)].row_keep);
      ps.admm.z = apply_row_selection(target, ps.rows);
    };
    for (WeightId id : kWeightIds) {
      PhaseState& ps = phase[slot(id)];
      ps.admm.w = current.weight(id);
      ps.admm.u = MatrixXd::Zero(ps.admm.w.rows(), ps.admm.w.cols());
      ps.admm.rho = config.rho;
      z_update(id, ps);
    }
    run_admm_phase(current, phase, config.admm_epochs, "admm-rows", config, column_mask,
                   train_data, report.loss_curve, z_update);
    for (WeightId id : kWeightIds) {
      current.weight(id) = phase[slot(id)].admm.z;
      masks[slot(id)] =
          StructuredMask::from_selection(column_choice[slot(id)], phase[slot(id)].rows);
    }
  }

  const ParamMask final_mask = to_param_mask(masks, classes);
  apply_mask(current, final_mask);

  TrainOptions retrain;
  retrain.lr = config.lr;
  retrain.batch = config.batch;
  retrain.epochs = config.retrain_epochs;
  retrain.seed = derive_seed(config.seed, "retrain");
  retrain.mask = final_mask;
  TrainResult tr = train(current, train_data, retrain);
  report.loss_curve.insert(report.loss_curve.end(), tr.loss_curve.begin(), tr.loss_curve.end());

  result.pruned = std::move(tr.params);
  result.masks = std::move(masks);
  report.matrices = mask_stats(result.masks);
  for (const auto& m : result.masks) {
    report.prunable += static_cast<std::size_t>(m.rows() * m.cols());
    report.preserved += m.nnz();
  }
  report.compression_rate = compression_rate(result.masks);
  report.accuracy_after = accuracy(result.pruned, test_data);
  return result;
}

WeightMasks magnitude_masks(const GruParamsd& params, const WeightPartitions& parts,
                            const PruneRates& rates) {
  params.validate();
  const auto constraints = constraints_for(params, parts, rates);
  WeightMasks masks;
  for (WeightId id : kWeightIds) {
    const MatrixXd& w = params.weight(id);
    const auto cols = select_block_columns(w, parts[slot(id)], constraints[slot(id)].col_keep);
    const MatrixXd column_pruned = apply_selection(w, cols);
    masks[slot(id)] =
        StructuredMask::from_selection(cols, select_rows(column_pruned, constraints[slot(id)].row_keep));
  }
  return masks;
}

double compression_rate(std::span<const StructuredMask> masks) {
  require(!masks.empty(), "compression_rate: no masks");
  std::size_t total = 0, kept = 0;
  for (const auto& m : masks) {
    total += static_cast<std::size_t>(m.rows() * m.cols());
    kept += m.nnz();
  }
  if (kept == 0) throw InfeasibleError("compression_rate: every weight is pruned (degenerate model)");
  return static_cast<double>(total) / static_cast<double>(kept);
}

double round_sig3(double value) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  const int digits = static_cast<int>(std::floor(std::log10(std::abs(value)))) + 1;
  const double scale = std::pow(10.0, 3 - digits);
  return std::round(value * scale) / scale;
}

ParamMask to_param_mask(const WeightMasks& masks, Index classes) {
  const Index hidden = masks[slot(WeightId::kWz)].rows();
  const Index input = masks[slot(WeightId::kWz)].cols();
  ParamMask out = full_mask(input, hidden, classes);
  for (WeightId id : kWeightIds) {
    const StructuredMask& m = masks[slot(id)];
    require(m.rows() == out.weight(id).rows() && m.cols() == out.weight(id).cols(),
            "to_param_mask: mask shape does not match weight " + std::string(weight_name(id)));
    out.weight(id) = m.grid();
  }
  return out;
}

std::vector<MatrixPruneStats> mask_stats(const WeightMasks& masks) {
  std::vector<MatrixPruneStats> out;
  for (WeightId id : kWeightIds) {
    const StructuredMask& m = masks[slot(id)];
    MatrixPruneStats s{std::string(weight_name(id)), m.rows(), m.cols(), m.nnz(), 0.0};
    s.rate = s.nnz == 0 ? INFINITY
                        : static_cast<double>(m.rows() * m.cols()) / static_cast<double>(s.nnz);
    out.push_back(std::move(s));
  }
  return out;
}

std::string prune_report_csv(const PruneReport& report) {
  std::string out = "matrix,rows,cols,nnz,rate\n";
  for (const auto& m : report.matrices) {
    out += fmt::format("{},{},{},{},{}\n", m.matrix, m.rows, m.cols, m.nnz, round_sig3(m.rate));
  }
  return out;
}

}  // namespace bspgru
