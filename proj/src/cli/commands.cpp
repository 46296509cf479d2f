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

#include "bspgru/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "bspgru/binary_io.hpp"
#include "bspgru/bspc/bspc_io.hpp"
#include "bspgru/kernel/benchmark.hpp"
#include "bspgru/kernel/op_count.hpp"
#include "bspgru/kernel/sparse_gru.hpp"
#include "bspgru/prune/mask_io.hpp"
#include "bspgru/tensor/checkpoint.hpp"

namespace bspgru {
namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- errors

namespace {
template <typename T>
bool is_a(const std::exception& e) {
  return dynamic_cast<const T*>(&e) != nullptr;
}
}  // namespace

ErrorInfo classify(const std::exception& e) {
  // A wrapper (TuneError) keeps its message but takes the cause's code.
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& cause) {
    ErrorInfo inner = classify(cause);
    inner.message = e.what();
    return inner;
  } catch (...) {
  }
  const std::string msg = e.what();
  if (is_a<ConfigError>(e)) return {"invalid_config", kExitUsage, msg};
  if (is_a<InvariantError>(e)) return {"invalid_argument", kExitUsage, msg};
  if (is_a<IoError>(e)) return {"missing_file", kExitMissingFile, msg};
  if (is_a<ParseError>(e) || is_a<CorruptionError>(e) || is_a<FormatError>(e) || is_a<InputFormatError>(e))
    return {"corrupt_file", kExitCorrupt, msg};
  if (is_a<InfeasibleError>(e)) return {"infeasible", kExitInfeasible, msg};
  if (is_a<DivergenceError>(e)) return {"divergence", kExitDivergence, msg};
  if (is_a<NumericError>(e)) return {"non_finite_input", kExitCorrupt, msg};
  if (is_a<VerifyError>(e)) return {"verify_failed", kExitVerify, msg};
  return {"failure", kExitFailure, msg};
}

std::string error_line(const ErrorInfo& info) {
  std::string msg;
  for (char ch : info.message) {
    if (ch == '"' || ch == '\\') msg += '\\';
    if (ch == '\n') {
      msg += "\\n";
      continue;
    }
    msg += ch;
  }
  return fmt::format("error: code={} exit={} message=\"{}\"", info.code, info.exit, msg);
}

// ---------------------------------------------------------------- helpers

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text(const fs::path& path) {
  const Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw InputFormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

template <typename T>
T json_get(const json& j, const char* key, const fs::path& path) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputFormatError(fmt::format("{}: missing or invalid '{}'", path.string(), key));
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InputFormatError(fmt::format("{}: '{}' is not a number", where, s));
  return v;
}

long long parse_int(const std::string& s, const std::string& where) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw InputFormatError(fmt::format("{}: '{}' is not an integer", where, s));
  return v;
}

struct Split {
  Dataset train, test, validation;
};

Split make_data(const RunConfig& c) {
  const SyntheticTask task = c.make_task();
  return {task.sample(c.task.train_size, "train"), task.sample(c.task.test_size, "test"),
          task.sample(c.task.test_size, "validation")};
}

MatrixXd bench_sequence(const RunConfig& c, Index input_dim) {
  SyntheticTask task = c.make_task();
  require(task.input_dim == input_dim, "bench: model input_dim differs from config task.input_dim");
  return task.sample(1, "bench").inputs.front();
}

fs::path model_dir(const CommandContext& ctx) { return ctx.out / files::kBspcDir; }

fs::path bspc_path(const fs::path& dir, WeightId id) {
  return dir / (std::string(weight_name(id)) + ".bspc");
}

SparseGru<double> load_sparse(const fs::path& dir, const ExecOptions& options) {
  std::array<BspcMatrix<double>, 6> mats;
  for (WeightId id : kWeightIds) mats[static_cast<std::size_t>(id)] = load_bspc(bspc_path(dir, id));
  const GruParamsd rest = load_checkpoint(dir / files::kRest);
  for (WeightId id : kWeightIds) {
    const auto& m = mats[static_cast<std::size_t>(id)];
    const auto& w = rest.weight(id);
    if (m.rows != w.rows() || m.cols != w.cols())
      throw CorruptionError(fmt::format("{}: shape differs from {}", bspc_path(dir, id).string(), files::kRest));
  }
  return assemble_sparse_gru(std::move(mats), rest, options);
}

WeightMasks masks_of(const SparseGru<double>& model) {
  WeightMasks m;
  for (WeightId id : kWeightIds) m[static_cast<std::size_t>(id)] = support_mask(model.weight(id).matrix);
  return m;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

// ---------------------------------------------------------------- dataset

std::string dataset_csv(const Dataset& data) {
  require(!data.inputs.empty(), "dataset_csv: empty dataset");
  const Index in = data.inputs.front().cols();
  std::string out = "seq,label,t";
  for (Index i = 0; i < in; ++i) out += fmt::format(",x{}", i);
  out += '\n';
  for (std::size_t n = 0; n < data.size(); ++n) {
    const MatrixXd& xs = data.inputs[n];
    for (Index t = 0; t < xs.rows(); ++t) {
      out += fmt::format("{},{},{}", n, data.labels[n], t);
      for (Index i = 0; i < in; ++i) out += fmt::format(",{}", xs(t, i));
      out += '\n';
    }
  }
  return out;
}

Dataset parse_dataset_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw InputFormatError("dataset: empty file");
  const auto header = split(lines[0], ',');
  if (header.size() < 4 || header[0] != "seq" || header[1] != "label" || header[2] != "t")
    throw InputFormatError("dataset: header must start with seq,label,t,x0");
  const auto in = static_cast<Index>(header.size() - 3);
  for (Index i = 0; i < in; ++i)
    if (header[static_cast<std::size_t>(3 + i)] != fmt::format("x{}", i))
      throw InputFormatError("dataset: input columns must be x0..x{I-1}");

  Dataset d;
  std::vector<std::vector<double>> rows;
  long long cur_seq = -1;
  auto flush = [&] {
    if (rows.empty()) return;
    MatrixXd xs(static_cast<Index>(rows.size()), in);
    for (std::size_t t = 0; t < rows.size(); ++t)
      for (Index i = 0; i < in; ++i) xs(static_cast<Index>(t), i) = rows[t][static_cast<std::size_t>(i)];
    if (!d.inputs.empty() && d.inputs.front().rows() != xs.rows())
      throw InputFormatError("dataset: sequences must all have the same length");
    d.inputs.push_back(std::move(xs));
    rows.clear();
  };
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::string where = fmt::format("dataset line {}", k + 1);
    const auto f = split(lines[k], ',');
    if (f.size() != header.size()) throw InputFormatError(where + ": wrong field count");
    const long long seq = parse_int(f[0], where);
    const long long label = parse_int(f[1], where);
    const long long t = parse_int(f[2], where);
    if (seq != cur_seq) {
      flush();
      if (seq != cur_seq + 1) throw InputFormatError(where + ": seq ids must be consecutive from 0");
      cur_seq = seq;
      d.labels.push_back(static_cast<int>(label));
    } else if (label != d.labels.back()) {
      throw InputFormatError(where + ": label changes within a sequence");
    }
    if (t != static_cast<long long>(rows.size())) throw InputFormatError(where + ": t must count up from 0");
    std::vector<double> x(static_cast<std::size_t>(in));
    for (Index i = 0; i < in; ++i) x[static_cast<std::size_t>(i)] = parse_double(f[static_cast<std::size_t>(3 + i)], where);
    rows.push_back(std::move(x));
  }
  flush();
  if (d.inputs.empty()) throw InputFormatError("dataset: no rows");
  return d;
}

// ---------------------------------------------------------------- commands

void cmd_gen(const CommandContext& ctx) {
  const Dataset test = ctx.config.make_task().sample(ctx.config.task.test_size, "test");
  write_text(ctx.out / files::kDataset, dataset_csv(test));
  std::cout << fmt::format("wrote {} sequences to {}\n", test.size(), (ctx.out / files::kDataset).string());
}

void cmd_train(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const Split data = make_data(c);
  const GruParamsd init = init_gru_params(c.task.input_dim, c.train.hidden_dim, c.task.num_classes,
                                          derive_seed(c.seed, "model"));
  const TrainResult r = train(init, data.train, c.train_options());
  save_checkpoint(ctx.out / files::kModel, r.params);

  std::string metrics = "epoch,loss\n";
  for (std::size_t e = 0; e < r.loss_curve.size(); ++e) metrics += fmt::format("{},{:.17g}\n", e + 1, r.loss_curve[e]);
  write_text(ctx.out / files::kTrainMetrics, metrics);
  const double train_acc = accuracy(r.params, data.train);
  const double test_acc = accuracy(r.params, data.test);
  write_text(ctx.out / files::kTrainSummary,
             json_text({{"seed", c.seed}, {"train_accuracy", train_acc}, {"test_accuracy", test_acc},
                        {"epochs", c.train.epochs}}));
  write_text(ctx.out / files::kConfig, emit_config(c));
  std::cout << fmt::format("train accuracy {:.4f}, test accuracy {:.4f}\n", train_acc, test_acc);
}

void cmd_prune(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const fs::path model = ctx.input.value_or(ctx.out / files::kModel);
  const GruParamsd dense = load_checkpoint(model);
  if (dense.input_dim() != c.task.input_dim || dense.num_classes() != c.task.num_classes)
    throw InvariantError("prune: checkpoint dimensions differ from the config task");
  const Split data = make_data(c);
  const BspResult r = bsp_prune(dense, uniform_partitions({c.prune.num_r, c.prune.num_c}),
                                {c.prune.col_rate, c.prune.row_rate}, c.bsp_config(), data.train, data.test);
  save_checkpoint(ctx.out / files::kPruned, r.pruned);
  save_masks(ctx.out / files::kMasks, r.masks);
  write_text(ctx.out / files::kPruneReport, prune_report_csv(r.report));
  write_text(ctx.out / files::kPruneSummary,
             json_text({{"col_rate", c.prune.col_rate},
                        {"row_rate", c.prune.row_rate},
                        {"num_r", c.prune.num_r},
                        {"num_c", c.prune.num_c},
                        {"prunable", r.report.prunable},
                        {"preserved", r.report.preserved},
                        {"compression_rate", r.report.compression_rate},
                        {"accuracy_before", r.report.accuracy_before},
                        {"accuracy_after", r.report.accuracy_after}}));
  std::cout << fmt::format("compression {:.3f}x, accuracy {:.4f} -> {:.4f}\n", r.report.compression_rate,
                           r.report.accuracy_before, r.report.accuracy_after);
}

void cmd_pack(const CommandContext& ctx) {
  const fs::path src = ctx.input.value_or(ctx.out);
  const GruParamsd pruned = load_checkpoint(src / files::kPruned);
  const WeightMasks masks = load_masks(src / files::kMasks);
  const fs::path dir = model_dir(ctx);
  fs::create_directories(dir);
  GruParamsd rest = pruned;
  std::size_t nnz = 0, index = 0;
  for (WeightId id : kWeightIds) {
    const auto k = static_cast<std::size_t>(id);
    if (masks[k].rows() != pruned.weight(id).rows() || masks[k].cols() != pruned.weight(id).cols())
      throw CorruptionError(fmt::format("pack: mask for {} does not match the checkpoint", weight_name(id)));
    const auto packed = reorder(encode(pruned.weight(id), masks[k])).matrix;
    save_bspc(bspc_path(dir, id), packed);
    nnz += packed.nnz();
    index += packed.index_entries();
    rest.weight(id).setZero();
  }
  save_checkpoint(dir / files::kRest, rest);
  std::cout << fmt::format("packed {} stored values, {} index entries into {}\n", nnz, index, dir.string());
}

void cmd_infer(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const SparseGru<double> model = load_sparse(model_dir(ctx), c.exec_options());
  const fs::path input = ctx.input.value_or(ctx.out / files::kDataset);
  const Dataset data = parse_dataset_csv(read_text(input));
  const VectorXd h0 = VectorXd::Zero(model.hidden_dim());
  const GruParamsd reference = dense_masked(model);

  std::string out = "seq,predicted,label\n";
  std::size_t correct = 0;
  double worst = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    if (data.inputs[n].cols() != model.input_dim())
      throw InvariantError(fmt::format("infer: input has {} features, model expects {}",
                                       data.inputs[n].cols(), model.input_dim()));
    const VectorXd logits = sparse_gru_forward(model, data.inputs[n], h0).logits;
    const int pred = predict(logits);
    correct += pred == data.labels[n] ? 1 : 0;
    out += fmt::format("{},{},{}\n", n, pred, data.labels[n]);
    if (ctx.verify) {
      const VectorXd ref = gru_forward_sequence(reference, data.inputs[n], h0).logits;
      for (Index k = 0; k < ref.size(); ++k) {
        const double rel = std::abs(logits[k] - ref[k]) / std::max(1.0, std::abs(ref[k]));
        worst = std::max(worst, rel);
      }
    }
  }
  write_text(ctx.out / files::kPredictions, out);
  std::cout << fmt::format("accuracy {:.4f} over {} sequences\n",
                           static_cast<double>(correct) / static_cast<double>(data.size()), data.size());
  if (ctx.verify) {
    if (!(worst <= 1e-10))
      throw VerifyError(fmt::format("sparse and dense-masked logits differ (max relative error {:.3e})", worst));
    std::cout << fmt::format("verify ok (max relative error {:.3e})\n", worst);
  }
}

void cmd_bench(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const fs::path input = ctx.input.value_or(model_dir(ctx));
  BenchOptions bo;
  bo.reps = c.bench.reps;
  bo.warmup = c.bench.warmup;
  std::vector<BenchRow> rows;

  volatile double sink = 0.0;
  auto dense_call = [&](const GruParamsd& params, const MatrixXd& xs) {
    return [&params, &xs, &sink, h0 = VectorXd::Zero(params.hidden_dim()).eval()] {
      sink = sink + gru_forward_sequence(params, xs, h0).logits[0];
    };
  };
  auto dense_row = [&](const GruParamsd& params, Index steps, const BenchStats& st) {
    const auto loads = count_ops_dense(params.input_dim(), params.hidden_dim(), steps).weight_ops / 2;
    return BenchRow{"dense_gru", 1.0, st, loads, loads, 1};
  };

  if (input.extension() == ".grup") {
    const GruParamsd params = load_checkpoint(input);
    const MatrixXd xs = bench_sequence(c, params.input_dim());
    const std::uint64_t ops = count_ops_dense(params.input_dim(), params.hidden_dim(), xs.rows()).total;
    rows.push_back(dense_row(params, xs.rows(), benchmark(dense_call(params, xs), bo, ops)));
  } else {
    const SparseGru<double> model = load_sparse(input, c.exec_options());
    const WeightMasks masks = masks_of(model);
    const GruParamsd dense = dense_masked(model);
    const MatrixXd xs = bench_sequence(c, model.input_dim());
    const VectorXd h0 = VectorXd::Zero(model.hidden_dim());
    LoadCounter counter;
    (void)sparse_gru_forward(model, xs, h0, &counter);
    std::uint64_t naive = 0;
    for (const auto& w : model.weights) naive += w.schedule.naive_loads();
    naive *= static_cast<std::uint64_t>(xs.rows());
    // Interleaved so the dense/sparse ratio is not skewed by a slow period
    // that overlaps only one of them.
    const std::vector<BenchStats> st = benchmark_interleaved(
        {dense_call(dense, xs), [&] { sink = sink + sparse_gru_forward(model, xs, h0).logits[0]; }}, bo,
        {count_ops_dense(dense.input_dim(), dense.hidden_dim(), xs.rows()).total, count_ops(masks, xs.rows()).total});
    rows.push_back(dense_row(dense, xs.rows(), st[0]));
    rows.push_back({"bspc_gru", compression_rate(masks), st[1], naive, counter.loads, c.bench.workers});
  }
  write_text(ctx.out / files::kBench, bench_csv(rows));
  for (const auto& r : rows)
    std::cout << fmt::format("{}: median {:.0f} ns (p10 {:.0f}, p90 {:.0f}), {:.3f} GOP/s\n", r.kernel,
                             r.stats.median_ns, r.stats.p10_ns, r.stats.p90_ns, r.stats.gops);
}

void cmd_tune(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const Split data = make_data(c);
  GruParamsd dense;
  const fs::path model = ctx.input.value_or(ctx.out / files::kModel);
  if (fs::exists(model)) {
    dense = load_checkpoint(model);
  } else {
    const GruParamsd init = init_gru_params(c.task.input_dim, c.train.hidden_dim, c.task.num_classes,
                                            derive_seed(c.seed, "model"));
    dense = train(init, data.train, c.train_options()).params;
  }
  const SearchSpace space = c.search_space();
  space.validate({{dense.hidden_dim(), dense.input_dim()}, {dense.hidden_dim(), dense.hidden_dim()}});

  const MatrixXd xs = bench_sequence(c, dense.input_dim());
  const VectorXd h0 = VectorXd::Zero(dense.hidden_dim());
  const PruneRates rates{c.prune.col_rate, c.prune.row_rate};
  BenchOptions bo;
  bo.reps = c.bench.reps;
  bo.warmup = c.bench.warmup;

  // Proxies depend only on the partition; the timing on everything.
  std::map<std::pair<Index, Index>, BspResult> proxies;
  const Evaluator evaluator = [&](const TuneConfig& cfg, std::uint64_t seed) {
    auto key = std::make_pair(cfg.num_r, cfg.num_c);
    auto it = proxies.find(key);
    if (it == proxies.end()) {
      it = proxies
               .emplace(key, proxy_prune(dense, {cfg.num_r, cfg.num_c}, rates, c.tune.budget_epochs,
                                         derive_seed(seed, "proxy"), data.train, data.validation))
               .first;
    }
    const SparseGru<double> sparse =
        compile_sparse_gru(it->second.pruned, it->second.masks, {cfg.tile, cfg.unroll, cfg.workers});
    volatile double sink = 0.0;
    const BenchStats st =
        benchmark([&] { sink = sink + sparse_gru_forward(sparse, xs, h0).logits[0]; }, bo, 0);
    return Evaluation{st.median_ns, it->second.report.accuracy_after};
  };
  const TuneResult r = tune(space, evaluator, c.tune.lambda, derive_seed(c.seed, "tune"));
  write_text(ctx.out / files::kTuneLog, tune_log_csv(r));
  double score = 0.0;
  for (const auto& rec : r.records)
    if (rec.chosen) score = rec.score;
  write_text(ctx.out / files::kTuneChoice,
             json_text({{"num_r", r.chosen.num_r},
                        {"num_c", r.chosen.num_c},
                        {"tile", r.chosen.tile},
                        {"unroll", r.chosen.unroll},
                        {"workers", r.chosen.workers},
                        {"lambda", r.lambda},
                        {"score", score}}));
  std::cout << fmt::format("chose {} (score {:.4f}) out of {} candidates\n", r.chosen.str(), score,
                           r.records.size());
}

namespace {

struct RunRow {
  std::string run;
  double compression = 1.0;
  double acc_dense = 0.0;
  double acc_pruned = 0.0;
  double dense_median = 0.0, dense_p10 = 0.0, dense_p90 = 0.0;
  double sparse_median = 0.0, sparse_p10 = 0.0, sparse_p90 = 0.0;
};

RunRow read_run(const fs::path& dir) {
  RunRow row;
  row.run = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
  const fs::path summary = dir / files::kPruneSummary;
  const json s = read_json(summary);
  row.compression = json_get<double>(s, "compression_rate", summary);
  row.acc_dense = json_get<double>(s, "accuracy_before", summary);
  row.acc_pruned = json_get<double>(s, "accuracy_after", summary);

  const fs::path bench = dir / files::kBench;
  const auto lines = lines_of(read_text(bench));
  if (lines.empty() || split(lines[0], ',').size() != 9 || split(lines[0], ',')[0] != "kernel")
    throw InputFormatError(bench.string() + ": unexpected header");
  bool have_dense = false, have_sparse = false;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto f = split(lines[k], ',');
    const std::string where = fmt::format("{} line {}", bench.string(), k + 1);
    if (f.size() != 9) throw InputFormatError(where + ": wrong field count");
    const double med = parse_double(f[2], where), p10 = parse_double(f[3], where), p90 = parse_double(f[4], where);
    if (f[0] == "dense_gru") {
      std::tie(row.dense_median, row.dense_p10, row.dense_p90) = std::tuple(med, p10, p90);
      have_dense = true;
    } else if (f[0] == "bspc_gru") {
      std::tie(row.sparse_median, row.sparse_p10, row.sparse_p90) = std::tuple(med, p10, p90);
      have_sparse = true;
    }
  }
  if (!have_dense || !have_sparse)
    throw InputFormatError(bench.string() + ": needs both dense_gru and bspc_gru rows");
  return row;
}

}  // namespace

void cmd_report(const CommandContext& ctx) {
  std::vector<fs::path> dirs = ctx.runs;
  if (dirs.empty()) dirs.push_back(ctx.out);
  std::vector<RunRow> rows;
  for (const auto& d : dirs) rows.push_back(read_run(d));
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RunRow& a, const RunRow& b) { return a.compression < b.compression; });

  std::string csv =
      "run,compression_rate,accuracy_dense,accuracy_pruned,dense_median_ns,sparse_median_ns,speedup,"
      "speedup_low,speedup_high\n";
  std::string txt = fmt::format("{:<16} {:>11} {:>9} {:>9} {:>12} {:>12} {:>8} {:>17}\n", "run", "compression",
                                "acc_dense", "acc_prune", "dense_ns", "sparse_ns", "speedup", "speedup_p10..p90");
  for (const auto& r : rows) {
    const double speedup = r.dense_median / r.sparse_median;
    const double lo = r.dense_p10 / r.sparse_p90;
    const double hi = r.dense_p90 / r.sparse_p10;
    csv += fmt::format("{},{:.4f},{:.4f},{:.4f},{:.1f},{:.1f},{:.4f},{:.4f},{:.4f}\n", r.run, r.compression,
                       r.acc_dense, r.acc_pruned, r.dense_median, r.sparse_median, speedup, lo, hi);
    txt += fmt::format("{:<16} {:>10.2f}x {:>9.4f} {:>9.4f} {:>12.0f} {:>12.0f} {:>7.2f}x {:>8.2f}..{:<7.2f}\n",
                       r.run, r.compression, r.acc_dense, r.acc_pruned, r.dense_median, r.sparse_median, speedup,
                       lo, hi);
  }
  write_text(ctx.out / files::kReportCsv, csv);
  write_text(ctx.out / files::kReportTxt, txt);
  std::cout << txt;
}

}  // namespace bspgru
