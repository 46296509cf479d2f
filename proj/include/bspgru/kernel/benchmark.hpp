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
#include <string>
#include <vector>

#include "bspgru/core.hpp"

namespace bspgru {

/// Monotonic nanosecond clock; injectable so timing logic can be tested.
using NanoClock = std::function<std::int64_t()>;
std::int64_t steady_now_ns();

struct BenchOptions {
  int reps = 21;
  int warmup = 3;
  /// Samples shorter than this repeat the callable inside one timed
  /// window; the per-call time is the window divided by the repeat count.
  std::int64_t min_sample_ns = 20'000;
};

struct BenchStats {
  double median_ns = 0.0;
  double p10_ns = 0.0;
  double p90_ns = 0.0;
  double gops = 0.0;            // ops_per_call / median
  std::uint64_t ops_per_call = 0;
  std::uint64_t loads = 0;
  int reps = 0;                 // timed samples
  std::int64_t inner_iters = 1; // calls per sample after widening
  std::vector<double> samples_ns;
};

/// Times `fn` after `warmup` untimed calls. Throws InvariantError if
/// reps < 5.
BenchStats benchmark(const std::function<void()>& fn, const BenchOptions& options,
                     std::uint64_t ops_per_call, std::uint64_t loads = 0,
                     const NanoClock& clock = steady_now_ns);

/// Times several callables sample by sample in round-robin order, so slow
/// periods of the machine hit all of them alike; use this for ratios.
std::vector<BenchStats> benchmark_interleaved(const std::vector<std::function<void()>>& fns,
                                              const BenchOptions& options,
                                              const std::vector<std::uint64_t>& ops_per_call,
                                              const NanoClock& clock = steady_now_ns);

/// Nearest-rank percentile of an unsorted sample set.
double percentile(std::vector<double> samples, double q);

struct BenchRow {
  std::string kernel;
  double compression_rate = 1.0;
  BenchStats stats;
  std::uint64_t loads_naive = 0;
  std::uint64_t loads_scheduled = 0;
  int workers = 1;
};

/// kernel,compression_rate,median_ns,p10_ns,p90_ns,gops,loads_naive,loads_scheduled,workers
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace bspgru
