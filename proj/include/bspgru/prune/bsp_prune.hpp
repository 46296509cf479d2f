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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bspgru/prune/admm.hpp"
#include "bspgru/prune/mask.hpp"
#include "bspgru/tensor/train.hpp"

namespace bspgru {

using WeightPartitions = std::array<BlockPartition, 6>;
using WeightMasks = std::array<StructuredMask, 6>;

inline WeightPartitions uniform_partitions(BlockPartition p) { return {p, p, p, p, p, p}; }

struct PruneRates {
  double col_rate = 1.0;  // within-block column compression
  double row_rate = 1.0;  // whole-matrix row compression
};

struct BspConfig {
  double rho = 1e-2;
  int admm_epochs = 8;    // ADMM iterations per step; one training epoch each
  int retrain_epochs = 8;
  double lr = 0.01;
  int batch = 16;
  std::uint64_t seed = 0;
};

struct MatrixPruneStats {
  std::string matrix;
  Index rows = 0;
  Index cols = 0;
  std::size_t nnz = 0;
  double rate = 1.0;  // rows*cols / nnz
};

struct PruneReport {
  std::vector<MatrixPruneStats> matrices;
  std::size_t prunable = 0;
  std::size_t preserved = 0;
  double compression_rate = 1.0;
  double accuracy_before = 0.0;
  double accuracy_after = 0.0;
  std::vector<double> loss_curve;  // admm step 1, admm step 2, retrain
};

struct BspResult {
  GruParamsd pruned;
  WeightMasks masks;
  PruneReport report;
};

/// Two-phase block-structured pruning of the six input/recurrent matrices:
///   1. ADMM with project_block_columns, then hard prune to Z;
///   2. ADMM with project_rows on the column-pruned weights (fresh Z, U),
///      hard prune, then mask-respecting retraining.
/// A phase whose constraint keeps everything is skipped. Readout and
/// biases are trained but never pruned.
BspResult bsp_prune(const GruParamsd& params, const WeightPartitions& parts,
                    const PruneRates& rates, const BspConfig& config, const Dataset& train_data,
                    const Dataset& test_data);

/// Hard-pruning selection without training: the masks BSP would pick for
/// the current weights (block columns first, then rows).
WeightMasks magnitude_masks(const GruParamsd& params, const WeightPartitions& parts,
                            const PruneRates& rates);

/// Total prunable entries / surviving entries. Throws InfeasibleError when
/// nothing survives.
double compression_rate(std::span<const StructuredMask> masks);

/// Rounds to three significant figures (the precision reports are written at).
double round_sig3(double value);

ParamMask to_param_mask(const WeightMasks& masks, Index classes);

/// Per-matrix statistics for a set of masks, in weight order.
std::vector<MatrixPruneStats> mask_stats(const WeightMasks& masks);

/// "matrix,rows,cols,nnz,rate" followed by one line per matrix.
std::string prune_report_csv(const PruneReport& report);

}  // namespace bspgru
