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


#include "stagesurv/pipeline/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fmt/format.h"
#include "stagesurv/common/csv.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/common/random.h"
#include "stagesurv/selection/metrics.h"

namespace stagesurv::pipeline {

using cohort::FeatureKind;
using cohort::FeatureSchema;
using cohort::Stage;
using cohort::SurvivalLabel;

namespace {

constexpr std::string_view kAliveCause = "Alive";
constexpr std::string_view kOtherCause = "Other Cause of Death";

struct NumericDraw {
  std::array<double, 3> mean;  // Per stage.
  std::array<double, 3> sd;
  double lo;
  double hi;
};

struct CodeDraw {
  std::vector<std::string> codes;
  // One weight row per stage, or a single row shared by all stages.
  std::vector<std::vector<double>> weights;
};

const std::map<std::string, NumericDraw>& NumericDraws() {
  static const std::map<std::string, NumericDraw> draws = {
      {"Age", {{62, 64, 66}, {12, 12, 12}, 18, 100}},
      {"Regional Nodes Examined", {{12, 16, 10}, {7, 7, 7}, 0, 90}},
      {"Regional Nodes Positive", {{0, 3, 4}, {1, 3.5, 4.5}, 0, 60}},
      {"Tumor Size", {{25, 45, 55}, {15, 15, 15}, 1, 250}},
  };
  return draws;
}

const std::map<std::string, CodeDraw>& CodeDraws() {
  static const std::map<std::string, CodeDraw> draws = {
      {"Extension",
       {{"1", "2", "3", "4", "5"},
        {{.45, .35, .15, .04, .01},
         {.10, .20, .35, .25, .10},
         {.05, .10, .25, .30, .30}}}},
      {"Grade", {{"1", "2", "3", "4"}, {{.15, .55, .20, .10}}}},
      {"Lymph Nodes",
       {{"0", "1", "2", "3"},
        {{.90, .08, .02, 0}, {.20, .40, .30, .10}, {.15, .35, .30, .20}}}},
      {"Marital Status",
       {{"1", "2", "3", "4", "5", "6"}, {{.20, .50, .05, .10, .12, .03}}}},
      {"Radiation", {{"0", "1", "2"}, {{.80, .15, .05}}}},
      {"Surgery Code",
       {{"0", "20", "30", "40", "50", "60"},
        {{.05, .25, .30, .20, .10, .10},
         {.10, .20, .30, .20, .10, .10},
         {.40, .20, .15, .10, .10, .05}}}},
      {"Behavior Code", {{"Malignant", "In situ"}, {{.97, .03}}}},
      {"Histologic Type",
       {{"8140", "8480", "8490", "8010"}, {{.70, .12, .03, .15}}}},
      {"Metastasis at Diagnosis",
       {{"None", "Liver", "Lung", "Bone", "Brain"},
        {{.80, .10, .05, .03, .02}}}},
      {"Primary Site",
       {{"C18.0", "C18.2", "C18.7", "C20.9", "C19.9"},
        {{.20, .15, .25, .30, .10}}}},
      {"Race",
       {{"White", "Black", "Asian or Pacific Islander",
         "American Indian/Alaska Native"},
        {{.78, .12, .09, .01}}}},
      {"Sequence Number",
       {{"One primary only", "1st of 2 or more primaries",
         "2nd of 2 or more primaries"},
        {{.80, .12, .08}}}},
      {"Sex", {{"Male", "Female"}, {{.52, .48}}}},
  };
  return draws;
}

const CodeDraw& GenericCodes(FeatureKind kind) {
  static const CodeDraw ordinal{{"0", "1", "2", "3", "4"},
                                {{.2, .2, .2, .2, .2}}};
  static const CodeDraw nominal{{"A", "B", "C"}, {{.5, .3, .2}}};
  return kind == FeatureKind::kNominal ? nominal : ordinal;
}

// Draws one cell; `value` receives the numeric reading of non-nominal cells.
class FeatureSampler {
 public:
  FeatureSampler(const cohort::FeatureSpec& spec, Stage stage)
      : kind_(spec.kind) {
    const size_t s = static_cast<size_t>(stage);
    if (kind_ == FeatureKind::kNumeric) {
      const auto it = NumericDraws().find(spec.name);
      const NumericDraw draw =
          it != NumericDraws().end() ? it->second
                                     : NumericDraw{{50, 50, 50}, {10, 10, 10},
                                                   -1e9, 1e9};
      normal_ = std::normal_distribution<double>(draw.mean[s], draw.sd[s]);
      lo_ = draw.lo;
      hi_ = draw.hi;
      return;
    }
    const auto it = CodeDraws().find(spec.name);
    const CodeDraw& draw =
        it != CodeDraws().end() ? it->second : GenericCodes(kind_);
    codes_ = draw.codes;
    const auto& weights = draw.weights.size() == 3 ? draw.weights[s]
                                                   : draw.weights.front();
    pick_ = std::discrete_distribution<size_t>(weights.begin(), weights.end());
  }

  std::string Draw(Rng& rng, double* value) {
    if (kind_ == FeatureKind::kNumeric) {
      const double v = std::clamp(std::round(normal_(rng)), lo_, hi_);
      *value = v;
      return fmt::format("{}", static_cast<int64_t>(v));
    }
    const std::string& code = codes_[pick_(rng)];
    *value = kind_ == FeatureKind::kOrdinal ? std::stod(code) : 0.0;
    return code;
  }

 private:
  FeatureKind kind_;
  std::normal_distribution<double> normal_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<std::string> codes_;
  std::discrete_distribution<size_t> pick_;
};

std::string StageCode(const FeatureSchema& schema, Stage stage) {
  const std::string name(cohort::StageName(stage));
  if (schema.MapStage(name) == stage) return name;
  for (const auto& [code, mapped] : schema.stage_map()) {
    if (mapped == stage) return code;
  }
  throw ConfigError(fmt::format("stage_map has no code for stage {}",
                                cohort::StageSlug(stage)));
}

double Logit(double p) { return std::log(p / (1.0 - p)); }
double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct GeneratedRow {
  std::vector<std::string> cells;  // Schema features.
  std::vector<double> values;
  SynthRow truth;
  std::string vital;
  int months = 0;
  std::string cause;
};

}  // namespace

SynthSpec SynthSpec::Planted(size_t n_per_stage, uint64_t seed) {
  SynthSpec spec;
  spec.n_per_stage = n_per_stage;
  spec.seed = seed;
  spec.coefficients[0] = {{"Age", 1.9}, {"Tumor Size", 1.4}, {"Extension", 1.0}};
  spec.coefficients[1] = {{"Age", 1.5}, {"Tumor Size", 1.5}, {"Extension", 1.3}};
  spec.coefficients[2] = {{"Age", 1.2}, {"Tumor Size", 1.7}, {"Extension", 1.5}};
  return spec;
}

SynthSpec SynthSpec::FromJson(const nlohmann::json& json,
                              uint64_t default_seed) {
  SynthSpec spec;
  try {
    if (!json.is_object()) throw ConfigError("synth spec must be an object");
    spec.n_per_stage = json.value("n_per_stage", spec.n_per_stage);
    spec.noise_scale = json.value("noise_scale", spec.noise_scale);
    spec.base_rate = json.value("base_rate", spec.base_rate);
    spec.excluded_fraction =
        json.value("excluded_fraction", spec.excluded_fraction);
    spec.incomplete_fraction =
        json.value("incomplete_fraction", spec.incomplete_fraction);
    spec.seed = json.value("seed", default_seed);
    spec.coefficients = Planted(spec.n_per_stage, spec.seed).coefficients;
    if (json.contains("coefficients")) {
      const auto& coef = json.at("coefficients");
      bool per_stage = !coef.empty();
      for (const auto& [key, value] : coef.items()) {
        if (!cohort::ParseStageSlug(key) || !value.is_object()) {
          per_stage = false;
        }
      }
      if (per_stage) {
        spec.coefficients = {};
        for (const auto& [key, value] : coef.items()) {
          spec.coefficients[static_cast<size_t>(*cohort::ParseStageSlug(key))] =
              value.get<std::map<std::string, double>>();
        }
      } else {
        const auto shared = coef.get<std::map<std::string, double>>();
        spec.coefficients.fill(shared);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("invalid synth spec: {}", e.what()));
  }
  if (spec.n_per_stage < 2) throw ConfigError("synth n_per_stage must be >= 2");
  if (!(spec.base_rate > 0.0 && spec.base_rate < 1.0)) {
    throw ConfigError("synth base_rate must lie in (0, 1)");
  }
  if (!(spec.noise_scale >= 0.0) || !(spec.excluded_fraction >= 0.0) ||
      !(spec.incomplete_fraction >= 0.0)) {
    throw ConfigError("synth noise_scale and fractions must be >= 0");
  }
  return spec;
}

nlohmann::json SynthSpec::ToJson() const {
  nlohmann::json coef = nlohmann::json::object();
  for (const Stage stage : cohort::kAllStages) {
    coef[std::string(cohort::StageSlug(stage))] =
        coefficients[static_cast<size_t>(stage)];
  }
  return {{"n_per_stage", n_per_stage},
          {"coefficients", coef},
          {"noise_scale", noise_scale},
          {"base_rate", base_rate},
          {"excluded_fraction", excluded_fraction},
          {"incomplete_fraction", incomplete_fraction},
          {"seed", seed}};
}

std::string SynthCohort::TruthTsv() const {
  std::string out = "row\tstage\tlabel\tlinear_predictor\tp_death\tincomplete\n";
  for (size_t i = 0; i < truth.size(); ++i) {
    const SynthRow& r = truth[i];
    out += fmt::format("{}\t{}\t{}\t{:.6f}\t{:.6f}\t{}\n", i,
                       cohort::StageSlug(r.stage),
                       cohort::SurvivalLabelName(r.label), r.linear_predictor,
                       r.p_death, r.incomplete ? 1 : 0);
  }
  return out;
}

SynthCohort GenerateSynth(const SynthSpec& spec, const FeatureSchema& schema) {
  const auto& features = schema.features();
  for (const auto& stage_coef : spec.coefficients) {
    for (const auto& [name, beta] : stage_coef) {
      const auto index = schema.FindFeature(name);
      if (!index) {
        throw ConfigError(
            fmt::format("synth coefficient names unknown feature '{}'", name));
      }
      if (features[*index].kind == FeatureKind::kNominal) {
        throw ConfigError(fmt::format(
            "synth coefficient on nominal feature '{}' is not supported", name));
      }
    }
  }
  const auto& codes = schema.cause_of_death_codes();
  std::string other_cause(kOtherCause);
  while (schema.CauseMatches(other_cause)) other_cause += " (other)";
  const double intercept = Logit(1.0 - spec.base_rate);
  const size_t n_excluded = static_cast<size_t>(
      std::llround(spec.excluded_fraction * static_cast<double>(spec.n_per_stage)));
  const size_t n_incomplete = static_cast<size_t>(std::llround(
      spec.incomplete_fraction * static_cast<double>(spec.n_per_stage)));

  std::vector<GeneratedRow> rows;
  std::vector<std::string> stage_codes;
  for (const Stage stage : cohort::kAllStages) {
    const size_t s = static_cast<size_t>(stage);
    stage_codes.push_back(StageCode(schema, stage));
    Rng rng = MakeRng(spec.seed, kStreamSynth + s);
    std::vector<FeatureSampler> samplers;
    for (const auto& feature : features) samplers.emplace_back(feature, stage);

    const size_t total = spec.n_per_stage + n_excluded + n_incomplete;
    std::vector<GeneratedRow> block(total);
    for (GeneratedRow& row : block) {
      row.cells.resize(features.size());
      row.values.resize(features.size());
      for (size_t f = 0; f < features.size(); ++f) {
        row.cells[f] = samplers[f].Draw(rng, &row.values[f]);
      }
      row.truth.stage = stage;
    }

    // Standardize planted features over the labeled rows of this stage.
    std::vector<std::pair<size_t, double>> terms;
    std::vector<double> mean, sd;
    for (const auto& [name, beta] : spec.coefficients[s]) {
      const size_t f = schema.FeatureIndex(name);
      double m = 0.0;
      for (size_t i = 0; i < spec.n_per_stage; ++i) m += block[i].values[f];
      m /= static_cast<double>(spec.n_per_stage);
      double ss = 0.0;
      for (size_t i = 0; i < spec.n_per_stage; ++i) {
        ss += (block[i].values[f] - m) * (block[i].values[f] - m);
      }
      terms.emplace_back(f, beta);
      mean.push_back(m);
      sd.push_back(std::sqrt(ss / static_cast<double>(spec.n_per_stage - 1)));
    }

    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (size_t i = 0; i < total; ++i) {
      GeneratedRow& row = block[i];
      double lp = intercept;
      for (size_t t = 0; t < terms.size(); ++t) {
        if (sd[t] > 0.0) {
          lp += terms[t].second * (row.values[terms[t].first] - mean[t]) / sd[t];
        }
      }
      const double hidden = spec.noise_scale > 0.0 ? spec.noise_scale * noise(rng)
                                                   : 0.0;
      row.truth.linear_predictor = lp;
      row.truth.p_death = Sigmoid(lp + hidden);
      const bool labeled = i < spec.n_per_stage || i >= spec.n_per_stage + n_excluded;
      if (labeled) {
        const bool died = unit(rng) < row.truth.p_death;
        row.truth.label = died ? SurvivalLabel::kNotSurvived
                               : SurvivalLabel::kSurvived;
        if (died) {
          row.vital = "Dead";
          row.months = std::uniform_int_distribution<int>(0, 59)(rng);
          row.cause = codes.front();
        } else {
          row.vital = "Alive";
          row.months = std::uniform_int_distribution<int>(60, 179)(rng);
          row.cause = kAliveCause;
        }
      } else {
        row.truth.label = SurvivalLabel::kExcluded;
        switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
          case 0:  // Alive but followed for less than five years.
            row.vital = "Alive";
            row.months = std::uniform_int_distribution<int>(0, 59)(rng);
            row.cause = kAliveCause;
            break;
          case 1:  // Died of another cause.
            row.vital = "Dead";
            row.months = std::uniform_int_distribution<int>(0, 179)(rng);
            row.cause = other_cause;
            break;
          default:  // Died of the cancer after five years.
            row.vital = "Dead";
            row.months = std::uniform_int_distribution<int>(60, 179)(rng);
            row.cause = codes.front();
            break;
        }
      }
      if (i >= spec.n_per_stage + n_excluded) {
        row.truth.incomplete = true;
        const size_t blank =
            std::uniform_int_distribution<size_t>(0, features.size() - 1)(rng);
        row.cells[blank].clear();
      }
    }
    for (GeneratedRow& row : block) rows.push_back(std::move(row));
  }

  Rng shuffle = MakeRng(spec.seed, kStreamSynth + 16);
  std::vector<size_t> order(rows.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::shuffle(order.begin(), order.end(), shuffle);

  SynthCohort out;
  out.csv = csv::FormatRow(schema.RequiredColumns()) + "\n";
  out.truth.reserve(rows.size());
  for (const size_t i : order) {
    GeneratedRow& row = rows[i];
    const cohort::VitalStatus status = row.vital == "Alive"
                                           ? cohort::VitalStatus::kAlive
                                           : cohort::VitalStatus::kDead;
    if (cohort::LabelSurvival(row.months, status, row.cause, codes) !=
        row.truth.label) {
      throw std::logic_error(fmt::format(
          "synth back-fill ({}, {} months, {}) does not reproduce label {}",
          row.vital, row.months, row.cause,
          cohort::SurvivalLabelName(row.truth.label)));
    }
    csv::Row cells = std::move(row.cells);
    cells.push_back(stage_codes[static_cast<size_t>(row.truth.stage)]);
    cells.push_back(row.vital);
    cells.push_back(std::to_string(row.months));
    cells.push_back(row.cause);
    out.csv += csv::FormatRow(cells);
    out.csv += '\n';
    out.truth.push_back(row.truth);
  }
  return out;
}

double GeneratorOracleAuc(const SynthCohort& cohort, Stage stage) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (const SynthRow& row : cohort.truth) {
    if (row.stage != stage || row.incomplete ||
        row.label == SurvivalLabel::kExcluded) {
      continue;
    }
    scores.push_back(-row.linear_predictor);
    labels.push_back(row.label == SurvivalLabel::kSurvived ? 1 : 0);
  }
  return selection::RocAuc(scores, labels);
}

}  // namespace stagesurv::pipeline
