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

#include "stagesurv/cohort/schema.h"

#include <algorithm>
#include <set>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::cohort {

std::string_view FeatureKindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kNumeric:
      return "numeric";
    case FeatureKind::kOrdinal:
      return "ordinal";
    case FeatureKind::kNominal:
      return "nominal";
  }
  return "?";
}

FeatureKind ParseFeatureKind(std::string_view text) {
  if (text == "numeric") return FeatureKind::kNumeric;
  if (text == "ordinal") return FeatureKind::kOrdinal;
  if (text == "nominal") return FeatureKind::kNominal;
  throw ConfigError(fmt::format("unknown feature kind '{}'", text));
}

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kLocalized:
      return "Localized";
    case Stage::kRegional:
      return "Regional";
    case Stage::kDistant:
      return "Distant";
  }
  return "?";
}

std::string_view StageSlug(Stage stage) {
  switch (stage) {
    case Stage::kLocalized:
      return "localized";
    case Stage::kRegional:
      return "regional";
    case Stage::kDistant:
      return "distant";
  }
  return "?";
}

std::optional<Stage> ParseStageSlug(std::string_view text) {
  for (const Stage stage : kAllStages) {
    if (text == StageSlug(stage) || text == StageName(stage)) return stage;
  }
  return std::nullopt;
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features,
                             LabelColumns labels, std::string stage_column,
                             std::map<std::string, Stage> stage_map,
                             std::string cancer_type,
                             std::vector<std::string> cause_of_death_codes)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      stage_column_(std::move(stage_column)),
      stage_map_(std::move(stage_map)),
      cancer_type_(std::move(cancer_type)),
      cause_codes_(std::move(cause_of_death_codes)) {
  if (features_.empty()) {
    throw ConfigError("schema declares no predictor features");
  }
  std::set<std::string> names;
  for (const auto& feature : features_) {
    if (feature.name.empty()) throw ConfigError("feature with empty name");
    if (!names.insert(feature.name).second) {
      throw ConfigError(
          fmt::format("duplicate feature name '{}'", feature.name));
    }
  }
  const std::array<const std::string*, 4> reserved = {
      &labels_.vital_status, &labels_.survival_months, &labels_.cause_of_death,
      &stage_column_};
  std::set<std::string> reserved_names;
  for (const std::string* column : reserved) {
    if (column->empty()) throw ConfigError("label or stage column unnamed");
    if (names.contains(*column)) {
      throw ConfigError(fmt::format(
          "column '{}' is both a predictor and a label/stage column", *column));
    }
    if (!reserved_names.insert(*column).second) {
      throw ConfigError(
          fmt::format("column '{}' used for two label roles", *column));
    }
  }
  if (stage_map_.empty()) throw ConfigError("stage_map is empty");
  if (cause_codes_.empty()) cause_codes_.push_back(cancer_type_);
}

FeatureSchema FeatureSchema::FromJson(const nlohmann::json& config) {
  try {
    std::vector<FeatureSpec> features;
    for (const auto& entry : config.at("features")) {
      features.push_back(
          {entry.at("name").get<std::string>(),
           ParseFeatureKind(entry.at("kind").get<std::string>()),
           entry.value("short_name", std::string())});
    }
    const auto& label_json = config.at("label_columns");
    LabelColumns labels{label_json.at("vital_status").get<std::string>(),
                        label_json.at("survival_months").get<std::string>(),
                        label_json.at("cause_of_death").get<std::string>()};
    std::map<std::string, Stage> stage_map;
    for (const auto& [code, value] : config.at("stage_map").items()) {
      const auto stage = ParseStageSlug(value.get<std::string>());
      if (!stage) {
        throw ConfigError(fmt::format(
            "stage_map entry '{}' maps to unknown stage '{}'", code,
            value.get<std::string>()));
      }
      stage_map[code] = *stage;
    }
    std::vector<std::string> causes;
    if (config.contains("cause_of_death_codes")) {
      causes = config.at("cause_of_death_codes").get<std::vector<std::string>>();
    }
    return FeatureSchema(std::move(features), std::move(labels),
                         config.at("stage_column").get<std::string>(),
                         std::move(stage_map),
                         config.at("cancer_type").get<std::string>(),
                         std::move(causes));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("invalid schema config: {}", e.what()));
  }
}

nlohmann::json FeatureSchema::ToJson() const {
  nlohmann::json out;
  auto& features = out["features"] = nlohmann::json::array();
  for (const auto& feature : features_) {
    nlohmann::json entry = {{"name", feature.name},
                            {"kind", FeatureKindName(feature.kind)}};
    if (!feature.short_name.empty()) entry["short_name"] = feature.short_name;
    features.push_back(std::move(entry));
  }
  out["label_columns"] = {{"vital_status", labels_.vital_status},
                          {"survival_months", labels_.survival_months},
                          {"cause_of_death", labels_.cause_of_death}};
  out["stage_column"] = stage_column_;
  auto& stage_map = out["stage_map"] = nlohmann::json::object();
  for (const auto& [code, stage] : stage_map_) {
    stage_map[code] = StageSlug(stage);
  }
  out["cancer_type"] = cancer_type_;
  out["cause_of_death_codes"] = cause_codes_;
  return out;
}

FeatureSchema FeatureSchema::Default(std::string cancer_type) {
  using K = FeatureKind;
  std::vector<FeatureSpec> features = {
      {"Extension", K::kOrdinal, ""},
      {"Grade", K::kOrdinal, ""},
      {"Lymph Nodes", K::kOrdinal, ""},
      {"Marital Status", K::kOrdinal, ""},
      {"Radiation", K::kOrdinal, ""},
      {"Surgery Code", K::kOrdinal, ""},
      {"Age", K::kNumeric, "Age"},
      {"Regional Nodes Examined", K::kNumeric, "Nodes Exam."},
      {"Regional Nodes Positive", K::kNumeric, "Nodes Pos."},
      {"Tumor Size", K::kNumeric, "Tumor Size"},
      {"Behavior Code", K::kNominal, ""},
      {"Histologic Type", K::kNominal, ""},
      {"Metastasis at Diagnosis", K::kNominal, ""},
      {"Primary Site", K::kNominal, ""},
      {"Race", K::kNominal, ""},
      {"Sequence Number", K::kNominal, ""},
      {"Sex", K::kNominal, ""},
  };
  std::map<std::string, Stage> stage_map = {
      {"Localized", Stage::kLocalized},
      {"Localized only", Stage::kLocalized},
      {"Regional", Stage::kRegional},
      {"Regional by direct extension only", Stage::kRegional},
      {"Regional lymph nodes involved only", Stage::kRegional},
      {"Regional by both direct extension and lymph node involvement",
       Stage::kRegional},
      {"Regional, NOS", Stage::kRegional},
      {"Distant", Stage::kDistant},
      {"Distant site(s)/node(s) involved", Stage::kDistant},
  };
  return FeatureSchema(std::move(features),
                       {"Vital Status Recode", "Survival Months",
                        "COD to Site Recode"},
                       "Summary Stage", std::move(stage_map),
                       std::move(cancer_type));
}

size_t FeatureSchema::FeatureIndex(std::string_view name) const {
  if (auto index = FindFeature(name)) return *index;
  throw ConfigError(fmt::format("unknown feature '{}'", name));
}

std::optional<size_t> FeatureSchema::FindFeature(std::string_view name) const {
  for (size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<Stage> FeatureSchema::MapStage(std::string_view code) const {
  const auto it = stage_map_.find(std::string(code));
  if (it == stage_map_.end()) return std::nullopt;
  return it->second;
}

bool FeatureSchema::CauseMatches(std::string_view cause) const {
  return std::find(cause_codes_.begin(), cause_codes_.end(), cause) !=
         cause_codes_.end();
}

std::vector<std::string> FeatureSchema::RequiredColumns() const {
  std::vector<std::string> columns;
  for (const auto& feature : features_) columns.push_back(feature.name);
  columns.push_back(stage_column_);
  columns.push_back(labels_.vital_status);
  columns.push_back(labels_.survival_months);
  columns.push_back(labels_.cause_of_death);
  return columns;
}

}  // namespace stagesurv::cohort
