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

#ifndef STAGESURV_COHORT_SCHEMA_H_
#define STAGESURV_COHORT_SCHEMA_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace stagesurv::cohort {

enum class FeatureKind { kNumeric, kOrdinal, kNominal };

std::string_view FeatureKindName(FeatureKind kind);
FeatureKind ParseFeatureKind(std::string_view text);

struct FeatureSpec {
  std::string name;
  FeatureKind kind;
  // Abbreviated report header ("Nodes Exam."); empty means use `name`.
  std::string short_name;

  std::string_view display_name() const {
    return short_name.empty() ? name : short_name;
  }
};

struct LabelColumns {
  std::string vital_status;
  std::string survival_months;
  std::string cause_of_death;
};

enum class Stage { kLocalized = 0, kRegional = 1, kDistant = 2 };
inline constexpr std::array<Stage, 3> kAllStages = {
    Stage::kLocalized, Stage::kRegional, Stage::kDistant};

std::string_view StageName(Stage stage);  // "Localized"
std::string_view StageSlug(Stage stage);  // "localized"
std::optional<Stage> ParseStageSlug(std::string_view text);

// Declarative description of a SEER-shaped cohort: the ordered predictor
// features, the three outcome columns, the summary-stage column with its
// code map, and the cancer type with the cause-of-death codes that count as
// death from that cancer.
class FeatureSchema {
 public:
  // Throws ConfigError when the invariants do not hold: unique feature
  // names, label/stage columns disjoint from predictors, at least one
  // predictor, a non-empty stage map.
  FeatureSchema(std::vector<FeatureSpec> features, LabelColumns labels,
                std::string stage_column, std::map<std::string, Stage> stage_map,
                std::string cancer_type,
                std::vector<std::string> cause_of_death_codes = {});

  // Config keys: features[{name, kind, short_name?}], label_columns
  // {vital_status, survival_months, cause_of_death}, stage_column, stage_map
  // {code: localized|regional|distant}, cancer_type, cause_of_death_codes?.
  static FeatureSchema FromJson(const nlohmann::json& config);
  nlohmann::json ToJson() const;

  // The 17 registry predictors (summary stage is the stratification column,
  // so it is not a predictor) with SEER-style column names.
  static FeatureSchema Default(std::string cancer_type = "Colorectal");

  const std::vector<FeatureSpec>& features() const { return features_; }
  const LabelColumns& label_columns() const { return labels_; }
  const std::string& stage_column() const { return stage_column_; }
  const std::map<std::string, Stage>& stage_map() const { return stage_map_; }
  const std::string& cancer_type() const { return cancer_type_; }
  const std::vector<std::string>& cause_of_death_codes() const {
    return cause_codes_;
  }

  size_t size() const { return features_.size(); }
  // Throws ConfigError for unknown names.
  size_t FeatureIndex(std::string_view name) const;
  std::optional<size_t> FindFeature(std::string_view name) const;
  std::optional<Stage> MapStage(std::string_view code) const;
  bool CauseMatches(std::string_view cause) const;

  // Every column the input must carry, predictors first.
  std::vector<std::string> RequiredColumns() const;

 private:
  std::vector<FeatureSpec> features_;
  LabelColumns labels_;
  std::string stage_column_;
  std::map<std::string, Stage> stage_map_;
  std::string cancer_type_;
  std::vector<std::string> cause_codes_;
};

}  // namespace stagesurv::cohort

#endif  // STAGESURV_COHORT_SCHEMA_H_
