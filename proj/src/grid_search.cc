/*
 * Copyright 2026 The Stagesurv Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "stagesurv/selection/grid_search.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "fmt/format.h"
#include "stagesurv/common/csv.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/common/parallel.h"
#include "stagesurv/learners/model.h"

namespace stagesurv::selection {

using learners::Learner;
using learners::ModelConfig;
using learners::ParamValue;

namespace {

std::vector<ParamValue> Ints(std::initializer_list<int64_t> values) {
  return {values.begin(), values.end()};
}
std::vector<ParamValue> Reals(std::initializer_list<double> values) {
  return {values.begin(), values.end()};
}
std::vector<ParamValue> Texts(std::initializer_list<const char*> values) {
  std::vector<ParamValue> out;
  for (const char* v : values) out.emplace_back(std::string(v));
  return out;
}

HyperAxis AxisFromJson(std::string name, const nlohmann::json& values) {
  if (!values.is_array()) {
    throw ConfigError(fmt::format("grid axis {} must be a list of values", name));
  }
  HyperAxis axis{std::move(name), {}};
  for (const auto& v : values) axis.values.push_back(learners::ParamFromJson(v));
  return axis;
}

struct FoldData {
  Matrix train_x, test_x;
  std::vector<int> train_y, test_y;
  std::vector<size_t> test_rows;
};

// Configs fitted together: indices into the expanded grid, each with the
// ensemble size it keeps (0 = use the fitted model as is).
struct FitGroup {
  ModelConfig fit_config;
  std::vector<std::pair<size_t, size_t>> members;
};

std::vector<FitGroup> GroupConfigs(const std::vector<ModelConfig>& configs,
                                   bool reuse_prefixes) {
  std::vector<FitGroup> groups;
  const std::string_view size_param = learners::EnsembleSizeParam(
      configs.empty() ? Learner::kLogisticRegression : configs.front().learner);
  if (!reuse_prefixes || size_param.empty()) {
    for (size_t i = 0; i < configs.size(); ++i) {
      groups.push_back({configs[i], {{i, 0}}});
    }
    return groups;
  }
  // Key: the config with its size parameter blanked out.
  std::map<std::string, size_t> group_of;
  for (size_t i = 0; i < configs.size(); ++i) {
    ModelConfig key = configs[i];
    std::optional<int64_t> size;
    for (auto& [name, value] : key.params) {
      if (name == size_param) {
        if (const auto* n = std::get_if<int64_t>(&value); n && *n >= 0) size = *n;
        value = std::string("*");
      }
    }
    if (!size) {
      groups.push_back({configs[i], {{i, 0}}});
      continue;
    }
    const std::string id = key.Describe();
    auto [it, inserted] = group_of.emplace(id, groups.size());
    if (inserted) groups.push_back({configs[i], {}});
    FitGroup& group = groups[it->second];
    group.members.emplace_back(i, static_cast<size_t>(*size));
    if (configs[i].GetInt(size_param, 0) > group.fit_config.GetInt(size_param, 0)) {
      group.fit_config = configs[i];
    }
  }
  return groups;
}

std::string FormatMetric(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

HyperGrid::HyperGrid(Learner learner, std::vector<HyperAxis> axes)
    : learner_(learner), axes_(std::move(axes)) {
  std::set<std::string> seen;
  for (const HyperAxis& axis : axes_) {
    if (axis.values.empty()) {
      throw ConfigError(fmt::format("grid axis {} has no values", axis.name));
    }
    if (!seen.insert(axis.name).second) {
      throw ConfigError(fmt::format("grid axis {} appears twice", axis.name));
    }
  }
}

HyperGrid HyperGrid::Default(Learner learner) {
  switch (learner) {
    case Learner::kLogisticRegression:
      return HyperGrid(learner, {{"C", Reals({0.001, 0.01, 0.1, 1, 10})},
                                 {"class_weight", Texts({"none", "balanced"})}});
    case Learner::kRandomForest:
      return HyperGrid(learner,
                       {{"n_estimators", Ints({100, 200})},
                        {"max_depth", Ints({3, 5, 7})},
                        {"min_samples_split", Ints({2, 5})},
                        {"min_samples_leaf", Ints({1, 2, 4})},
                        {"class_weight", Texts({"balanced", "balanced_subsample"})}});
    case Learner::kAdaBoost:
      return HyperGrid(learner, {{"n_estimators", Ints({50, 100, 200})},
                                 {"learning_rate", Reals({0.01, 0.1, 1.0})},
                                 {"algorithm", Texts({"SAMME", "SAMME.R"})}});
    case Learner::kSymGbdt:
      return HyperGrid(learner,
                       {{"iterations", Ints({100, 200})},
                        {"depth", Ints({3, 5, 7})},
                        {"learning_rate", Reals({0.03, 0.1})},
                        {"l2_leaf_reg", Reals({1, 3, 5})},
                        {"class_weights", Texts({"[1,1]", "[1,3]", "[1,5]"})}});
  }
  throw ConfigError("unknown learner");
}

HyperGrid HyperGrid::FromJson(Learner learner, const nlohmann::json& json) {
  std::vector<HyperAxis> axes;
  if (json.is_object()) {
    for (const auto& [name, values] : json.items()) {
      axes.push_back(AxisFromJson(name, values));
    }
  } else if (json.is_array()) {
    for (const auto& entry : json) {
      if (!entry.is_object() || !entry.contains("name") || !entry.contains("values")) {
        throw ConfigError("grid axes must be objects with name and values");
      }
      axes.push_back(AxisFromJson(entry["name"].get<std::string>(), entry["values"]));
    }
  } else {
    throw ConfigError(fmt::format("grid for {} must be an object or a list",
                                  learners::LearnerTag(learner)));
  }
  return HyperGrid(learner, std::move(axes));
}

nlohmann::json HyperGrid::ToJson() const {
  nlohmann::json out = nlohmann::json::array();
  for (const HyperAxis& axis : axes_) {
    nlohmann::json values = nlohmann::json::array();
    for (const ParamValue& v : axis.values) values.push_back(learners::ParamToJson(v));
    out.push_back({{"name", axis.name}, {"values", std::move(values)}});
  }
  return out;
}

size_t HyperGrid::size() const {
  size_t n = 1;
  for (const HyperAxis& axis : axes_) n *= axis.values.size();
  return n;
}

std::vector<ModelConfig> HyperGrid::Expand(uint64_t seed) const {
  std::vector<ModelConfig> out;
  out.reserve(size());
  std::vector<size_t> index(axes_.size(), 0);
  for (size_t n = 0; n < size(); ++n) {
    ModelConfig config{learner_, {}, seed};
    for (size_t a = 0; a < axes_.size(); ++a) {
      config.params.emplace_back(axes_[a].name, axes_[a].values[index[a]]);
    }
    out.push_back(std::move(config));
    // Odometer with the last axis fastest.
    for (size_t a = axes_.size(); a-- > 0;) {
      if (++index[a] < axes_[a].values.size()) break;
      index[a] = 0;
    }
  }
  return out;
}

ColumnScaling ColumnScaling::Fit(const Matrix& x, std::span<const size_t> rows,
                                 std::vector<size_t> columns) {
  ColumnScaling s{std::move(columns), {}, {}};
  for (const size_t c : s.columns) {
    double mean = 0;
    for (const size_t r : rows) mean += x(r, c);
    mean /= static_cast<double>(rows.size());
    double var = 0;
    for (const size_t r : rows) var += (x(r, c) - mean) * (x(r, c) - mean);
    const double std = std::sqrt(var / static_cast<double>(rows.size()));
    s.mean.push_back(mean);
    s.std.push_back(std > 0 ? std : 1.0);
  }
  return s;
}

void ColumnScaling::Apply(Matrix* x) const {
  for (size_t r = 0; r < x->rows(); ++r) {
    for (size_t j = 0; j < columns.size(); ++j) {
      double& v = (*x)(r, columns[j]);
      v = (v - mean[j]) / std[j];
    }
  }
}

GridResult GridSearch(const Matrix& x, std::span<const int> labels,
                      std::span<const size_t> scaled_columns,
                      const HyperGrid& grid, const FoldPlan& plan,
                      const GridSearchOptions& options) {
  if (labels.size() != x.rows() || plan.assignments.size() != x.rows()) {
    throw DimensionError("grid search inputs disagree on the number of rows");
  }
  const int k = plan.k;
  std::vector<FoldData> folds(k);
  for (int f = 0; f < k; ++f) {
    const auto train = plan.TrainIndices(f);
    FoldData& fold = folds[f];
    fold.test_rows = plan.TestIndices(f);
    if (train.empty() || fold.test_rows.empty()) {
      throw DataError(fmt::format("fold {} is empty", f));
    }
    const ColumnScaling scaling = ColumnScaling::Fit(
        x, train, {scaled_columns.begin(), scaled_columns.end()});
    fold.train_x = x.SelectRows(train);
    fold.test_x = x.SelectRows(fold.test_rows);
    scaling.Apply(&fold.train_x);
    scaling.Apply(&fold.test_x);
    for (const size_t r : train) fold.train_y.push_back(labels[r]);
    for (const size_t r : fold.test_rows) fold.test_y.push_back(labels[r]);
  }

  const std::vector<ModelConfig> configs = grid.Expand(options.seed);
  const std::vector<FitGroup> groups = GroupConfigs(configs, options.reuse_prefixes);

  // Per (config, fold) slots, filled by independent work units.
  const size_t n_configs = configs.size();
  std::vector<MetricsRow> fold_metrics(n_configs * k);
  std::vector<std::string> fold_errors(n_configs * k);
  std::vector<std::vector<double>> oof(n_configs, std::vector<double>(x.rows(), 0.0));

  ParallelFor(groups.size() * k, options.threads, [&](size_t unit) {
    const FitGroup& group = groups[unit / k];
    const int f = static_cast<int>(unit % k);
    const FoldData& fold = folds[f];
    std::optional<learners::TrainedModel> fitted;
    std::string error;
    try {
      // Work units are already parallel; fits stay single-threaded.
      fitted = learners::Fit(group.fit_config, fold.train_x, fold.train_y, {}, 1);
    } catch (const Error& e) {
      error = e.what();
    }
    for (const auto& [config_index, size] : group.members) {
      const size_t slot = config_index * k + f;
      if (!fitted) {
        fold_errors[slot] = error;
        continue;
      }
      try {
        const learners::TrainedModel model =
            size > 0 && size != fitted->ensemble_size() ? fitted->Truncated(size)
                                                       : *fitted;
        const std::vector<double> scores = model.PredictProba(fold.test_x);
        MetricsRow row = ThresholdedMetrics(scores, fold.test_y, options.threshold);
        row.auc = RocAuc(scores, fold.test_y);
        fold_metrics[slot] = row;
        for (size_t i = 0; i < scores.size(); ++i) {
          oof[config_index][fold.test_rows[i]] = scores[i];
        }
      } catch (const Error& e) {
        fold_errors[slot] = e.what();
      }
    }
  });

  GridResult result;
  result.learner = grid.learner();
  result.k = k;
  std::optional<size_t> best;
  for (size_t c = 0; c < n_configs; ++c) {
    ConfigResult cr{configs[c], {}, {}, false, {}};
    for (int f = 0; f < k; ++f) {
      const size_t slot = c * k + f;
      if (!fold_errors[slot].empty()) {
        cr.failed = true;
        if (cr.error.empty()) {
          cr.error = fmt::format("fold {}: {}", f + 1, fold_errors[slot]);
        }
      }
      cr.folds.push_back(fold_metrics[slot]);
    }
    if (!cr.failed) {
      cr.mean = MeanMetrics(cr.folds);
      if (!best || cr.mean.auc > result.configs[*best].mean.auc) best = c;
    }
    result.configs.push_back(std::move(cr));
  }
  if (!best) {
    throw FitError(fmt::format("every {} config failed; first error: {}",
                               learners::LearnerName(grid.learner()),
                               result.configs.front().error));
  }
  result.best_index = *best;
  for (int f = 0; f < k; ++f) {
    std::vector<double> scores;
    for (const size_t r : folds[f].test_rows) scores.push_back(oof[*best][r]);
    result.best_fold_curves.push_back(ComputeRoc(scores, folds[f].test_y));
  }
  return result;
}

GridResult GridSearch(const cohort::CohortTable& table, const HyperGrid& grid,
                      const FoldPlan& plan, const GridSearchOptions& options) {
  const std::vector<size_t> numeric = table.NumericColumns();
  return GridSearch(table.rows(), table.labels(), numeric, grid, plan, options);
}

std::string GridResultsCsv(std::span<const GridResult> results) {
  int k = 0;
  for (const GridResult& r : results) k = std::max(k, r.k);
  csv::Row header = {"learner", "config", "params", "status", "accuracy",
                     "precision", "recall", "f1", "auc"};
  for (int f = 0; f < k; ++f) header.push_back(fmt::format("fold{}_auc", f + 1));
  header.push_back("selected");
  header.push_back("error");
  std::string out = csv::FormatRow(header) + "\n";
  for (const GridResult& r : results) {
    for (size_t c = 0; c < r.configs.size(); ++c) {
      const ConfigResult& cr = r.configs[c];
      csv::Row row = {std::string(learners::LearnerTag(r.learner)),
                      std::to_string(c + 1), cr.config.Describe(),
                      cr.failed ? "failed" : "ok"};
      for (const double v : {cr.mean.accuracy, cr.mean.precision, cr.mean.recall,
                             cr.mean.f1, cr.mean.auc}) {
        row.push_back(cr.failed ? "" : FormatMetric(v));
      }
      for (int f = 0; f < k; ++f) {
        const bool has = !cr.failed && f < static_cast<int>(cr.folds.size());
        row.push_back(has ? FormatMetric(cr.folds[f].auc) : "");
      }
      row.push_back(c == r.best_index ? "1" : "0");
      row.push_back(cr.error);
      out += csv::FormatRow(row) + "\n";
    }
  }
  return out;
}

}  // namespace stagesurv::selection
