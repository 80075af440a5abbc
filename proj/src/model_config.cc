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

#include "stagesurv/learners/model_config.h"

#include <algorithm>
#include <cmath>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::learners {

std::string_view LearnerTag(Learner learner) {
  switch (learner) {
    case Learner::kLogisticRegression:
      return "lr";
    case Learner::kRandomForest:
      return "rf";
    case Learner::kAdaBoost:
      return "ada";
    case Learner::kSymGbdt:
      return "gbdt";
  }
  return "?";
}

std::string_view LearnerName(Learner learner) {
  switch (learner) {
    case Learner::kLogisticRegression:
      return "Logistic Regression";
    case Learner::kRandomForest:
      return "Random Forest";
    case Learner::kAdaBoost:
      return "AdaBoost";
    case Learner::kSymGbdt:
      return "SymGBDT";
  }
  return "?";
}

std::optional<Learner> ParseLearnerTag(std::string_view tag) {
  for (const Learner learner : kAllLearners) {
    if (LearnerTag(learner) == tag) return learner;
  }
  return std::nullopt;
}

std::string FormatParam(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::string>) {
          return v;
        } else {
          return fmt::format("{}", v);
        }
      },
      value);
}

nlohmann::json ParamToJson(const ParamValue& value) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, value);
}

ParamValue ParamFromJson(const nlohmann::json& value) {
  if (value.is_number_integer()) return value.get<int64_t>();
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return value.get<std::string>();
  // Manual class-weight pairs may be written as JSON arrays.
  if (value.is_array() && value.size() == 2) {
    return fmt::format("[{},{}]", value[0].get<double>(),
                       value[1].get<double>());
  }
  throw ConfigError(fmt::format("unsupported parameter value {}", value.dump()));
}

const ParamValue* ModelConfig::Find(std::string_view name) const {
  for (const auto& [key, value] : params) {
    if (key == name) return &value;
  }
  return nullptr;
}

double ModelConfig::GetDouble(std::string_view name, double fallback) const {
  const ParamValue* value = Find(name);
  if (value == nullptr) return fallback;
  if (const auto* d = std::get_if<double>(value)) return *d;
  if (const auto* i = std::get_if<int64_t>(value)) return static_cast<double>(*i);
  throw ConfigError(fmt::format("parameter {} must be numeric", name));
}

int64_t ModelConfig::GetInt(std::string_view name, int64_t fallback) const {
  const ParamValue* value = Find(name);
  if (value == nullptr) return fallback;
  if (const auto* i = std::get_if<int64_t>(value)) return *i;
  if (const auto* d = std::get_if<double>(value); d && *d == std::floor(*d)) {
    return static_cast<int64_t>(*d);
  }
  throw ConfigError(fmt::format("parameter {} must be an integer", name));
}

std::string ModelConfig::GetString(std::string_view name,
                                   std::string fallback) const {
  const ParamValue* value = Find(name);
  if (value == nullptr) return fallback;
  if (const auto* s = std::get_if<std::string>(value)) return *s;
  throw ConfigError(fmt::format("parameter {} must be text", name));
}

void ModelConfig::CheckNames(
    std::initializer_list<std::string_view> allowed) const {
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(fmt::format("{} has no parameter \"{}\"",
                                    LearnerName(learner), key));
    }
  }
}

std::string ModelConfig::Describe() const {
  std::string out;
  for (const auto& [key, value] : params) {
    if (!out.empty()) out.push_back(' ');
    out += fmt::format("{}={}", key, FormatParam(value));
  }
  return out;
}

nlohmann::json ModelConfig::ParamsJson() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : params) out[key] = ParamToJson(value);
  return out;
}

}  // namespace stagesurv::learners
