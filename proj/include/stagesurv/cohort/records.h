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

#ifndef STAGESURV_COHORT_RECORDS_H_
#define STAGESURV_COHORT_RECORDS_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stagesurv/cohort/schema.h"

namespace stagesurv::cohort {

enum class VitalStatus { kAlive, kDead };

// One input row with every schema column present. `values` is aligned with
// FeatureSchema::features().
struct RawRecord {
  std::vector<std::string> values;
  std::string stage_code;
  VitalStatus vital_status = VitalStatus::kAlive;
  int survival_months = 0;
  std::string cause_of_death;
  size_t line = 0;  // Source line, for reports.
};

struct DroppedRow {
  size_t line;
  std::string reason;
};

struct ParseResult {
  std::vector<RawRecord> records;
  std::vector<DroppedRow> dropped;
  size_t total_rows = 0;

  // One line per dropped row followed by summary counts.
  std::string Report() const;
};

// Reads a header-first CSV cohort. Rows with an empty schema cell, a
// non-numeric numeric/ordinal cell, an unreadable vital status or a negative
// or non-integer survival-months cell are dropped and reported. Throws
// SchemaError naming the first schema column missing from the header.
ParseResult ParseDataset(std::string_view csv_text, const FeatureSchema& schema);

enum class SurvivalLabel { kSurvived, kNotSurvived, kExcluded };

std::string_view SurvivalLabelName(SurvivalLabel label);

// Five-year rule: >= 60 months and alive survived; < 60 months and dead of
// one of `cause_codes` did not; everything else is excluded. Throws
// ValidationError for negative months.
SurvivalLabel LabelSurvival(int survival_months, VitalStatus status,
                            std::string_view cause_of_death,
                            std::span<const std::string> cause_codes);
SurvivalLabel LabelSurvival(const RawRecord& record, const FeatureSchema& schema);
SurvivalLabel LabelSurvival(const RawRecord& record, std::string_view cancer_type);

struct LabeledRecord {
  RawRecord record;
  bool survived = false;
};

struct LabelingResult {
  std::vector<LabeledRecord> records;
  size_t excluded = 0;
};

LabelingResult LabelRecords(std::vector<RawRecord> records,
                            const FeatureSchema& schema);

struct StageSplit {
  std::array<std::vector<LabeledRecord>, 3> subsets;

  const std::vector<LabeledRecord>& operator[](Stage stage) const {
    return subsets[static_cast<size_t>(stage)];
  }
  size_t total() const;
  // "Localized 33.1% (n = 17,582)"
  std::vector<std::string> ReportLines() const;
};

// Partitions records by the schema's stage map. Throws DataError listing
// every unmapped stage code.
StageSplit SplitByStage(std::vector<LabeledRecord> records,
                        const FeatureSchema& schema);

// 17582 -> "17,582".
std::string FormatCount(size_t count);

}  // namespace stagesurv::cohort

#endif  // STAGESURV_COHORT_RECORDS_H_
