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

#include "bspgru/kernel/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

namespace bspgru {

std::int64_t steady_now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double percentile(std::vector<double> samples, double q) {
  require(!samples.empty(), "percentile: no samples");
  std::sort(samples.begin(), samples.end());
  const double rank = std::ceil(q * static_cast<double>(samples.size()));
  const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(samples.size()))) - 1;
  return samples[idx];
}

namespace {

/// Widens the timed window until it is well above clock granularity.
std::int64_t calibrate(const std::function<void()>& fn, const BenchOptions& options, const NanoClock& clock) {
  std::int64_t inner = 1;
  for (;;) {
    const std::int64_t t0 = clock();
    for (std::int64_t i = 0; i < inner; ++i) fn();
    const std::int64_t elapsed = clock() - t0;
    if (elapsed >= options.min_sample_ns || inner >= (std::int64_t{1} << 30)) return inner;
    const double grow = elapsed > 0 ? static_cast<double>(options.min_sample_ns) / static_cast<double>(elapsed) : 16.0;
    inner = std::max(inner + 1, static_cast<std::int64_t>(std::ceil(static_cast<double>(inner) * std::min(grow * 1.2, 16.0))));
  }
}

}  // namespace

std::vector<BenchStats> benchmark_interleaved(const std::vector<std::function<void()>>& fns,
                                              const BenchOptions& options,
                                              const std::vector<std::uint64_t>& ops_per_call,
                                              const NanoClock& clock) {
  require(options.reps >= 5, "benchmark: reps must be >= 5");
  require(options.warmup >= 0, "benchmark: warmup must be >= 0");
  require(ops_per_call.size() == fns.size(), "benchmark: one op count per callable");
  std::vector<BenchStats> out(fns.size());
  for (std::size_t k = 0; k < fns.size(); ++k) {
    for (int i = 0; i < options.warmup; ++i) fns[k]();
    BenchStats& st = out[k];
    st.reps = options.reps;
    st.inner_iters = calibrate(fns[k], options, clock);
    st.ops_per_call = ops_per_call[k];
    st.samples_ns.reserve(static_cast<std::size_t>(options.reps));
  }
  for (int r = 0; r < options.reps; ++r) {
    for (std::size_t k = 0; k < fns.size(); ++k) {
      const std::int64_t inner = out[k].inner_iters;
      const std::int64_t t0 = clock();
      for (std::int64_t i = 0; i < inner; ++i) fns[k]();
      const std::int64_t elapsed = clock() - t0;
      out[k].samples_ns.push_back(static_cast<double>(elapsed) / static_cast<double>(inner));
    }
  }
  for (BenchStats& st : out) {
    st.median_ns = percentile(st.samples_ns, 0.5);
    st.p10_ns = percentile(st.samples_ns, 0.1);
    st.p90_ns = percentile(st.samples_ns, 0.9);
    st.gops = st.median_ns > 0.0 ? static_cast<double>(st.ops_per_call) / st.median_ns : 0.0;
  }
  return out;
}

BenchStats benchmark(const std::function<void()>& fn, const BenchOptions& options,
                     std::uint64_t ops_per_call, std::uint64_t loads, const NanoClock& clock) {
  BenchStats st = benchmark_interleaved({fn}, options, {ops_per_call}, clock).front();
  st.loads = loads;
  return st;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out =
      "kernel,compression_rate,median_ns,p10_ns,p90_ns,gops,loads_naive,loads_scheduled,workers\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.1f},{:.1f},{:.1f},{:.4f},{},{},{}\n", r.kernel, r.compression_rate,
                       r.stats.median_ns, r.stats.p10_ns, r.stats.p90_ns, r.stats.gops,
                       r.loads_naive, r.loads_scheduled, r.workers);
  }
  return out;
}

}  // namespace bspgru
