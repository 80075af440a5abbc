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

#ifndef STAGESURV_PIPELINE_SYNTH_H_
#define STAGESURV_PIPELINE_SYNTH_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "stagesurv/cohort/records.h"
#include "stagesurv/cohort/schema.h"

namespace stagesurv::pipeline {

// Logistic outcome model of a synthetic cohort. Coefficients multiply the
// standardized (within stage) feature value; positive values push towards
// death. `base_rate` is the survival probability at the mean patient.
struct SynthSpec {
  size_t n_per_stage = 2000;
  std::array<std::map<std::string, double>, 3> coefficients;
  double noise_scale = 0.0;  // Std of an unobserved Gaussian logit term.
  double base_rate = 0.5;
  // Extra rows, as fractions of n_per_stage: rows the labeling rule
  // excludes and rows with a blank cell that cleaning drops.
  double excluded_fraction = 0.0;
  double incomplete_fraction = 0.0;
  uint64_t seed = 0;

  // Age, Tumor Size and Extension planted in every stage with
  // stage-dependent strength.
  static SynthSpec Planted(size_t n_per_stage, uint64_t seed);

  // Keys mirror the fields. "coefficients" is either one {feature: beta}
  // map used for every stage or {stage slug: {feature: beta}}, where
  // unlisted stages get no signal; without it the planted coefficients
  // apply. Other missing keys keep their defaults; "seed" falls back to
  // `default_seed`.
  static SynthSpec FromJson(const nlohmann::json& json, uint64_t default_seed);
  nlohmann::json ToJson() const;
};

// Generator ground truth for one emitted CSV row.
struct SynthRow {
  cohort::Stage stage = cohort::Stage::kLocalized;
  cohort::SurvivalLabel label = cohort::SurvivalLabel::kExcluded;
  double linear_predictor = 0.0;  // Observed part of the death logit.
  double p_death = 0.0;           // Including the unobserved term.
  bool incomplete = false;        // Carries a blank cell.
};

struct SynthCohort {
  std::string csv;
  std::vector<SynthRow> truth;  // Aligned with the CSV data rows.

  // row, stage, label, linear_predictor, p_death, incomplete
  std::string TruthTsv() const;
};

// Draws a cohort for `schema`: numeric features from clamped Gaussians,
// ordinal codes and nominal categories from fixed frequencies, then the
// outcome from the logistic model, then vital status, survival months and
// cause of death chosen so that LabelSurvival reproduces the outcome. Rows
// of all stages are shuffled together. Throws ConfigError when a
// coefficient names an unknown or nominal feature.
SynthCohort GenerateSynth(const SynthSpec& spec,
                          const cohort::FeatureSchema& schema);

// AUC of the generator's own survival score (-linear_predictor) on the
// labeled, complete rows of one stage; the ceiling a model of the observed
// features can reach when noise_scale is 0.
double GeneratorOracleAuc(const SynthCohort& cohort, cohort::Stage stage);

}  // namespace stagesurv::pipeline

#endif  // STAGESURV_PIPELINE_SYNTH_H_
