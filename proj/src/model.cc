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

#include "stagesurv/learners/model.h"

#include <algorithm>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::learners {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

int CheckedInt(const ModelConfig& config, std::string_view name, int fallback,
               int minimum) {
  const int64_t value = config.GetInt(name, fallback);
  if (value < minimum || value > 1'000'000) {
    throw ConfigError(fmt::format("{} must be in [{}, 1000000], got {}", name,
                                  minimum, value));
  }
  return static_cast<int>(value);
}

}  // namespace

TrainedModel::TrainedModel(ModelConfig config, size_t feature_count,
                           State state)
    : config_(std::move(config)),
      feature_count_(feature_count),
      state_(std::move(state)) {
  const Learner expected = std::visit(
      Overloaded{[](const LogisticModel&) { return Learner::kLogisticRegression; },
                 [](const ForestModel&) { return Learner::kRandomForest; },
                 [](const AdaBoostModel&) { return Learner::kAdaBoost; },
                 [](const SymGbdtModel&) { return Learner::kSymGbdt; }},
      state_);
  if (expected != config_.learner) {
    throw ConfigError("model state does not match the configured learner");
  }
  if (const auto* lr = std::get_if<LogisticModel>(&state_)) {
    if (lr->coefficients.size() != feature_count_) {
      throw DimensionError(fmt::format("logistic model has {} coefficients for {} features",
                                       lr->coefficients.size(), feature_count_));
    }
  }
}

double TrainedModel::PredictProba(std::span<const double> row) const {
  if (row.size() != feature_count_) {
    throw DimensionError(fmt::format("expected a row of {} features, got {}",
                                     feature_count_, row.size()));
  }
  const double p =
      std::visit([&](const auto& model) { return model.PredictProba(row); }, state_);
  return std::clamp(p, 0.0, 1.0);
}

std::vector<double> TrainedModel::PredictProba(const Matrix& x) const {
  std::vector<double> out(x.rows());
  for (size_t r = 0; r < x.rows(); ++r) out[r] = PredictProba(x.row(r));
  return out;
}

size_t TrainedModel::ensemble_size() const {
  return std::visit(
      Overloaded{[](const LogisticModel&) -> size_t { return 0; },
                 [](const ForestModel& m) { return m.trees.size(); },
                 [](const AdaBoostModel& m) { return m.stages.size(); },
                 [](const SymGbdtModel& m) { return m.trees.size(); }},
      state_);
}

std::string_view EnsembleSizeParam(Learner learner) {
  switch (learner) {
    case Learner::kLogisticRegression:
      return "";
    case Learner::kRandomForest:
    case Learner::kAdaBoost:
      return "n_estimators";
    case Learner::kSymGbdt:
      return "iterations";
  }
  return "";
}

TrainedModel TrainedModel::Truncated(size_t k) const {
  if (learner() == Learner::kLogisticRegression) {
    throw ConfigError("logistic regression has no ensemble to truncate");
  }
  const std::string_view size_param = EnsembleSizeParam(learner());
  const int64_t configured = config_.GetInt(size_param, 0);
  if (static_cast<int64_t>(k) > configured) {
    throw ConfigError(fmt::format("cannot truncate {} = {} to {}", size_param,
                                  configured, k));
  }
  State state = state_;
  std::visit(Overloaded{[](LogisticModel&) {},
                        [&](ForestModel& m) { m.trees.resize(std::min(k, m.trees.size())); },
                        [&](AdaBoostModel& m) { m.stages.resize(std::min(k, m.stages.size())); },
                        [&](SymGbdtModel& m) { m.trees.resize(std::min(k, m.trees.size())); }},
             state);
  ModelConfig config = config_;
  for (auto& [name, value] : config.params) {
    if (name == size_param) value = static_cast<int64_t>(k);
  }
  return TrainedModel(std::move(config), feature_count_, std::move(state));
}

nlohmann::json TrainedModel::ToJson() const {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& [name, value] : config_.params) {
    params.push_back({name, ParamToJson(value)});
  }
  nlohmann::json state =
      std::visit([](const auto& model) { return model.ToJson(); }, state_);
  return {{"format", kModelFormat},
          {"version", kModelFormatVersion},
          {"learner", LearnerTag(config_.learner)},
          {"params", std::move(params)},
          {"seed", config_.seed},
          {"feature_count", feature_count_},
          {"state", std::move(state)}};
}

TrainedModel TrainedModel::FromJson(const nlohmann::json& json) {
  try {
    if (json.at("format").get<std::string>() != kModelFormat) {
      throw DataError("not a stagesurv model document");
    }
    const int version = json.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError(fmt::format("unsupported model format version {}", version));
    }
    const std::string tag = json.at("learner").get<std::string>();
    const auto learner = ParseLearnerTag(tag);
    if (!learner) throw DataError(fmt::format("unknown learner '{}'", tag));
    ModelConfig config;
    config.learner = *learner;
    config.seed = json.at("seed").get<uint64_t>();
    for (const auto& entry : json.at("params")) {
      config.params.emplace_back(entry.at(0).get<std::string>(),
                                 ParamFromJson(entry.at(1)));
    }
    const auto& state_json = json.at("state");
    State state;
    switch (*learner) {
      case Learner::kLogisticRegression:
        state = LogisticModel::FromJson(state_json);
        break;
      case Learner::kRandomForest:
        state = ForestModel::FromJson(state_json);
        break;
      case Learner::kAdaBoost:
        state = AdaBoostModel::FromJson(state_json);
        break;
      case Learner::kSymGbdt:
        state = SymGbdtModel::FromJson(state_json);
        break;
    }
    return TrainedModel(std::move(config), json.at("feature_count").get<size_t>(),
                        std::move(state));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("malformed model document: {}", e.what()));
  }
}

TrainedModel Fit(const ModelConfig& config, const Matrix& x,
                 std::span<const int> labels,
                 std::span<const double> sample_weights, int threads) {
  switch (config.learner) {
    case Learner::kLogisticRegression: {
      config.CheckNames({"C", "class_weight"});
      const double c = config.GetDouble("C", 1.0);
      const auto cw = ClassWeightSpec::Parse(config.GetString("class_weight", "none"));
      return TrainedModel(config, x.cols(),
                          FitLogistic(x, labels, sample_weights, cw, c));
    }
    case Learner::kRandomForest: {
      config.CheckNames({"n_estimators", "max_depth", "min_samples_split",
                         "min_samples_leaf", "class_weight"});
      RandomForestParams params;
      params.n_estimators = CheckedInt(config, "n_estimators", params.n_estimators, 1);
      params.max_depth = CheckedInt(config, "max_depth", params.max_depth, 1);
      params.min_samples_split =
          CheckedInt(config, "min_samples_split", params.min_samples_split, 2);
      params.min_samples_leaf =
          CheckedInt(config, "min_samples_leaf", params.min_samples_leaf, 1);
      params.class_weight = ClassWeightSpec::Parse(
          config.GetString("class_weight", params.class_weight.ToString()));
      return TrainedModel(config, x.cols(),
                          FitRandomForest(x, labels, sample_weights, params,
                                          config.seed, threads));
    }
    case Learner::kAdaBoost: {
      config.CheckNames({"n_estimators", "learning_rate", "algorithm"});
      AdaBoostParams params;
      params.n_estimators = CheckedInt(config, "n_estimators", params.n_estimators, 1);
      params.learning_rate = config.GetDouble("learning_rate", params.learning_rate);
      params.algorithm = ParseBoostAlgorithm(
          config.GetString("algorithm", std::string(BoostAlgorithmName(params.algorithm))));
      return TrainedModel(config, x.cols(),
                          FitAdaBoost(x, labels, sample_weights, params));
    }
    case Learner::kSymGbdt: {
      config.CheckNames({"iterations", "depth", "learning_rate", "l2_leaf_reg",
                         "class_weights"});
      SymGbdtParams params;
      params.iterations = CheckedInt(config, "iterations", params.iterations, 0);
      params.depth = CheckedInt(config, "depth", params.depth, 1);
      params.learning_rate = config.GetDouble("learning_rate", params.learning_rate);
      params.l2_leaf_reg = config.GetDouble("l2_leaf_reg", params.l2_leaf_reg);
      params.class_weights = ClassWeightSpec::Parse(
          config.GetString("class_weights", params.class_weights.ToString()));
      return TrainedModel(config, x.cols(),
                          FitSymGbdt(x, labels, sample_weights, params));
    }
  }
  throw ConfigError("unknown learner");
}

}  // namespace stagesurv::learners
