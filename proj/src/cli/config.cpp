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

#include "bspgru/cli/config.hpp"

#include "bspgru/binary_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <type_traits>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace bspgru {
namespace {

using nlohmann::json;

/// Reads fields of one JSON object, remembering which keys were consumed so
/// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(fmt::format("config: '{}' must be an object", path_));
  }

  template <typename T>
  void field(const char* key, T& dst) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ConfigError("");
        if (std::is_unsigned_v<T> && !it->is_number_unsigned()) throw ConfigError("");
        if (it->is_number_unsigned()) {
          if (it->template get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<T>::max()))
            throw ConfigError("");
        } else if (it->template get<std::int64_t>() < static_cast<std::int64_t>(std::numeric_limits<T>::min()) ||
                   it->template get<std::int64_t>() > static_cast<std::int64_t>(std::numeric_limits<T>::max())) {
          throw ConfigError("");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError("");
      } else {
        if (!it->is_array()) throw ConfigError("");
        for (const auto& e : *it)
          if (!e.is_number_integer()) throw ConfigError("");
      }
      dst = it->template get<T>();
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("config: '{}.{}' has the wrong type", path_, key));
    }
  }

  const json& child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? empty_ : *it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(fmt::format("config: unknown key '{}.{}'", path_, it.key()));
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
  inline static const json empty_ = json::object();
};

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("config: " + msg);
}

}  // namespace

void RunConfig::validate() const {
  check(schema_version == kConfigSchemaVersion,
        fmt::format("unsupported schema_version {} (expected {})", schema_version, kConfigSchemaVersion));
  check(!out.empty(), "out must be nonempty");
  check(task.seq_len >= 1 && task.input_dim >= 1, "task.seq_len and task.input_dim must be >= 1");
  check(task.num_classes >= 2, "task.num_classes must be >= 2");
  check(std::isfinite(task.noise_std) && task.noise_std >= 0.0, "task.noise_std must be >= 0");
  check(task.train_size >= 1 && task.test_size >= 1, "task sizes must be >= 1");
  check(train.hidden_dim >= 1, "train.hidden_dim must be >= 1");
  check(train.epochs >= 0 && train.batch >= 1, "train.epochs must be >= 0 and train.batch >= 1");
  check(std::isfinite(train.lr) && train.lr > 0.0, "train.lr must be positive");
  check(std::isfinite(train.clip_norm), "train.clip_norm must be finite");
  check(std::isfinite(prune.col_rate) && prune.col_rate >= 1.0, "prune.col_rate must be >= 1");
  check(std::isfinite(prune.row_rate) && prune.row_rate >= 1.0, "prune.row_rate must be >= 1");
  check(prune.num_r >= 1 && prune.num_c >= 1, "prune.num_r and prune.num_c must be >= 1");
  check(std::isfinite(prune.rho) && prune.rho > 0.0, "prune.rho must be positive");
  check(prune.admm_epochs >= 0 && prune.retrain_epochs >= 0, "prune epoch counts must be >= 0");
  check(bench.reps >= 5, "bench.reps must be >= 5");
  check(bench.warmup >= 0, "bench.warmup must be >= 0");
  check(bench.tile >= 1, "bench.tile must be >= 1");
  check(bench.unroll >= 1 && bench.unroll <= kMaxUnroll, "bench.unroll must be in [1, 8]");
  check(bench.workers >= 1, "bench.workers must be >= 1");
  check(std::isfinite(tune.lambda) && tune.lambda >= 0.0, "tune.lambda must be >= 0");
  check(tune.budget_epochs >= 0, "tune.budget_epochs must be >= 0");
  try {
    search_space().validate();
  } catch (const InvariantError& e) {
    throw ConfigError(std::string("config: tune: ") + e.what());
  }
}

SyntheticTask RunConfig::make_task() const {
  return SyntheticTask::make(task.seq_len, task.input_dim, task.num_classes, task.noise_std,
                             derive_seed(seed, "task"));
}

TrainOptions RunConfig::train_options() const {
  TrainOptions o;
  o.lr = train.lr;
  o.epochs = train.epochs;
  o.batch = train.batch;
  o.clip_norm = train.clip_norm;
  o.seed = derive_seed(seed, "train");
  return o;
}

BspConfig RunConfig::bsp_config() const {
  BspConfig c;
  c.rho = prune.rho;
  c.admm_epochs = prune.admm_epochs;
  c.retrain_epochs = prune.retrain_epochs;
  c.lr = train.lr;
  c.batch = train.batch;
  c.seed = derive_seed(seed, "prune");
  return c;
}

ExecOptions RunConfig::exec_options() const { return {bench.tile, bench.unroll, bench.workers}; }

SearchSpace RunConfig::search_space() const {
  return {tune.num_r, tune.num_c, tune.tile, tune.unroll, tune.workers};
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config: invalid JSON: {}", e.what()));
  }
  RunConfig c;
  ObjectReader top(root, "$");
  // The version is mandatory so old files fail loudly instead of defaulting.
  if (!root.contains("schema_version"))
    throw ConfigError("config: missing required key schema_version");
  top.field("schema_version", c.schema_version);
  top.field("seed", c.seed);
  top.field("out", c.out);
  {
    ObjectReader r(top.child("task"), "task");
    r.field("seq_len", c.task.seq_len);
    r.field("input_dim", c.task.input_dim);
    r.field("num_classes", c.task.num_classes);
    r.field("noise_std", c.task.noise_std);
    r.field("train_size", c.task.train_size);
    r.field("test_size", c.task.test_size);
    r.finish();
  }
  {
    ObjectReader r(top.child("train"), "train");
    r.field("hidden_dim", c.train.hidden_dim);
    r.field("epochs", c.train.epochs);
    r.field("lr", c.train.lr);
    r.field("batch", c.train.batch);
    r.field("clip_norm", c.train.clip_norm);
    r.finish();
  }
  {
    ObjectReader r(top.child("prune"), "prune");
    r.field("col_rate", c.prune.col_rate);
    r.field("row_rate", c.prune.row_rate);
    r.field("num_r", c.prune.num_r);
    r.field("num_c", c.prune.num_c);
    r.field("rho", c.prune.rho);
    r.field("admm_epochs", c.prune.admm_epochs);
    r.field("retrain_epochs", c.prune.retrain_epochs);
    r.finish();
  }
  {
    ObjectReader r(top.child("bench"), "bench");
    r.field("reps", c.bench.reps);
    r.field("warmup", c.bench.warmup);
    r.field("tile", c.bench.tile);
    r.field("unroll", c.bench.unroll);
    r.field("workers", c.bench.workers);
    r.finish();
  }
  {
    ObjectReader r(top.child("tune"), "tune");
    r.field("num_r", c.tune.num_r);
    r.field("num_c", c.tune.num_c);
    r.field("tile", c.tune.tile);
    r.field("unroll", c.tune.unroll);
    r.field("workers", c.tune.workers);
    r.field("lambda", c.tune.lambda);
    r.field("budget_epochs", c.tune.budget_epochs);
    r.finish();
  }
  top.finish();
  c.validate();
  return c;
}

std::string emit_config(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["task"] = {{"seq_len", c.task.seq_len},         {"input_dim", c.task.input_dim},
               {"num_classes", c.task.num_classes}, {"noise_std", c.task.noise_std},
               {"train_size", c.task.train_size},   {"test_size", c.task.test_size}};
  j["train"] = {{"hidden_dim", c.train.hidden_dim}, {"epochs", c.train.epochs},
                {"lr", c.train.lr},                 {"batch", c.train.batch},
                {"clip_norm", c.train.clip_norm}};
  j["prune"] = {{"col_rate", c.prune.col_rate},       {"row_rate", c.prune.row_rate},
                {"num_r", c.prune.num_r},             {"num_c", c.prune.num_c},
                {"rho", c.prune.rho},                 {"admm_epochs", c.prune.admm_epochs},
                {"retrain_epochs", c.prune.retrain_epochs}};
  j["bench"] = {{"reps", c.bench.reps}, {"warmup", c.bench.warmup}, {"tile", c.bench.tile},
                {"unroll", c.bench.unroll}, {"workers", c.bench.workers}};
  j["tune"] = {{"num_r", c.tune.num_r},   {"num_c", c.tune.num_c},   {"tile", c.tune.tile},
               {"unroll", c.tune.unroll}, {"workers", c.tune.workers}, {"lambda", c.tune.lambda},
               {"budget_epochs", c.tune.budget_epochs}};
  return j.dump(2) + "\n";
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace bspgru
