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

#ifndef STAGESURV_COHORT_TABLE_H_
#define STAGESURV_COHORT_TABLE_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stagesurv/cohort/records.h"
#include "stagesurv/cohort/schema.h"
#include "stagesurv/common/matrix.h"

namespace stagesurv::cohort {

struct EncodedColumn {
  size_t feature;  // Index into FeatureSchema::features().
  std::string name;
  // Set for one-hot indicator columns.
  std::optional<std::string> category;
};

struct ColumnStats {
  double mean = 0.0;
  double std = 1.0;  // Population standard deviation, 1 when clamped.
};

// Everything learned from the fitting set, indexed by schema feature.
struct EncodingStats {
  std::vector<std::vector<std::string>> categories;  // Nominal only, sorted.
  std::vector<std::optional<ColumnStats>> numeric;   // Numeric only.
};

// Immutable design matrix of an encoded cohort.
class CohortTable {
 public:
  CohortTable(std::shared_ptr<const FeatureSchema> schema,
              std::vector<EncodedColumn> columns, Matrix rows,
              std::vector<int> labels, std::vector<Stage> stages,
              EncodingStats stats, std::vector<std::string> warnings);

  const FeatureSchema& schema() const { return *schema_; }
  std::shared_ptr<const FeatureSchema> shared_schema() const { return schema_; }
  const std::vector<EncodedColumn>& columns() const { return columns_; }
  const Matrix& rows() const { return rows_; }
  // 1 = survived.
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<Stage>& stages() const { return stages_; }
  const EncodingStats& stats() const { return stats_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  size_t num_rows() const { return rows_.rows(); }
  size_t num_columns() const { return columns_.size(); }

  // Encoded columns belonging to one schema feature, in order.
  std::vector<size_t> ColumnsOf(size_t feature) const;
  // Encoded columns of numeric features (the standardized ones).
  std::vector<size_t> NumericColumns() const;
  std::vector<std::string> ColumnNames() const;
  // Value in the input's units; undoes standardization of numeric columns.
  double RawValue(size_t row, size_t column) const;

 private:
  std::shared_ptr<const FeatureSchema> schema_;
  std::vector<EncodedColumn> columns_;
  Matrix rows_;
  std::vector<int> labels_;
  std::vector<Stage> stages_;
  EncodingStats stats_;
  std::vector<std::string> warnings_;
};

// Fit mode (no `fit_stats`): nominal features expand to one indicator per
// category seen in `records`, sorted lexicographically; numeric features are
// z-scored with the population mean/std of `records` (a zero std is clamped
// to 1 with a warning); ordinal codes pass through. Transform mode reuses
// `fit_stats`, and unseen categories encode as all-zero indicators.
// Throws DataError when fitting on no records or on an unmapped stage code.
CohortTable Encode(std::span<const LabeledRecord> records,
                   std::shared_ptr<const FeatureSchema> schema,
                   const EncodingStats* fit_stats = nullptr);

// Pearson correlation; nullopt when either input has zero variance or fewer
// than two values.
std::optional<double> PearsonCorrelation(std::span<const double> x,
                                         std::span<const double> y);

struct CorrelationMatrix {
  std::vector<std::string> names;
  // Symmetric, unit diagonal; nullopt marks an undefined coefficient.
  std::vector<std::vector<std::optional<double>>> values;

  std::string ToTsv() const;
};

// Correlation between the given features, which must each map to one encoded
// column. Defaults to all numeric features.
CorrelationMatrix ComputeCorrelation(const CohortTable& table,
                                     std::span<const size_t> features);
CorrelationMatrix ComputeCorrelation(const CohortTable& table);

}  // namespace stagesurv::cohort

#endif  // STAGESURV_COHORT_TABLE_H_
