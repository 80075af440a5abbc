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


#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "fmt/format.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "stagesurv/cohort/records.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/pipeline/config.h"
#include "stagesurv/pipeline/run.h"
#include "stagesurv/pipeline/synth.h"

namespace stagesurv::pipeline {
namespace {

namespace fs = std::filesystem;
using cohort::FeatureSchema;
using cohort::Stage;
using cohort::SurvivalLabel;
using nlohmann::json;

class TempDir {
 public:
  TempDir() {
    const auto* info = testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            fmt::format("stagesurv_{}_{}_{}", info->test_suite_name(),
                        info->name(), ::getpid());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, std::string_view text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Small grids so a full run takes a second or two.
json FastConfigJson(uint64_t seed, size_t n_per_stage) {
  return {{"seed", seed},
          {"synth", {{"n_per_stage", n_per_stage},
                     {"excluded_fraction", 0.05},
                     {"incomplete_fraction", 0.02}}},
          {"grids",
           {{"lr", {{"C", {0.1, 1.0}}}},
            {"rf", {{"n_estimators", {10, 20}}, {"max_depth", {4}}}},
            {"ada", {{"n_estimators", {10}}}},
            {"gbdt", {{"iterations", {10, 20}}, {"depth", {3}}}}}},
          {"explain",
           {{"background_size", 20},
            {"summary_instances", 10},
            {"kernel_samples", 64},
            {"lime_samples", 500}}}};
}

const std::vector<std::string> kStageFiles = {
    "grid_search.csv",  "best_models.json", "metrics.csv",
    "shap_ranking.tsv", "shap_beeswarm.tsv", "lime_case.json",
    "group_stats.csv",  "group_stats.txt",   "correlation.tsv"};

double SurvivalRate(const SynthCohort& cohort) {
  size_t labeled = 0, survived = 0;
  for (const SynthRow& row : cohort.truth) {
    if (row.label == SurvivalLabel::kExcluded) continue;
    ++labeled;
    survived += row.label == SurvivalLabel::kSurvived ? 1 : 0;
  }
  return static_cast<double>(survived) / static_cast<double>(labeled);
}

TEST(SynthTest, ZeroCoefficientsGiveCoinFlips) {
  SynthSpec spec;
  spec.n_per_stage = 2000;
  spec.seed = 5;
  const SynthCohort cohort = GenerateSynth(spec, FeatureSchema::Default());
  for (const Stage stage : cohort::kAllStages) {
    size_t n = 0, survived = 0;
    for (const SynthRow& row : cohort.truth) {
      if (row.stage != stage) continue;
      ++n;
      survived += row.label == SurvivalLabel::kSurvived ? 1 : 0;
    }
    ASSERT_EQ(n, 2000u);
    const double rate = static_cast<double>(survived) / 2000.0;
    EXPECT_GE(rate, 0.45);
    EXPECT_LE(rate, 0.55);
  }
}

TEST(SynthTest, PositiveAgeCoefficientRaisesNonSurvivorAge) {
  SynthSpec spec;
  spec.n_per_stage = 2000;
  spec.seed = 9;
  spec.coefficients.fill({{"Age", 2.0}});
  const FeatureSchema schema = FeatureSchema::Default();
  const SynthCohort cohort = GenerateSynth(spec, schema);
  const auto parsed = cohort::ParseDataset(cohort.csv, schema);
  const size_t age = schema.FeatureIndex("Age");
  double sum[2] = {0, 0};
  size_t count[2] = {0, 0};
  for (const auto& record : parsed.records) {
    const SurvivalLabel label = cohort::LabelSurvival(record, schema);
    if (label == SurvivalLabel::kExcluded) continue;
    const int survived = label == SurvivalLabel::kSurvived ? 1 : 0;
    sum[survived] += std::stod(record.values[age]);
    ++count[survived];
  }
  EXPECT_GT(sum[0] / count[0], sum[1] / count[1] + 5.0);
}

TEST(SynthTest, BackFillRoundTripsEveryLabel) {
  SynthSpec spec = SynthSpec::Planted(700, 13);
  spec.excluded_fraction = 0.2;
  spec.incomplete_fraction = 0.1;
  const FeatureSchema schema = FeatureSchema::Default();
  const SynthCohort cohort = GenerateSynth(spec, schema);
  ASSERT_EQ(cohort.truth.size(), 3u * (700 + 140 + 70));

  const auto parsed = cohort::ParseDataset(cohort.csv, schema);
  size_t incomplete = 0;
  for (const SynthRow& row : cohort.truth) incomplete += row.incomplete ? 1 : 0;
  EXPECT_EQ(parsed.dropped.size(), incomplete);
  EXPECT_EQ(parsed.records.size(), cohort.truth.size() - incomplete);

  // Records keep input order; line 2 is data row 0.
  size_t checked = 0, excluded = 0;
  for (const auto& record : parsed.records) {
    const SynthRow& truth = cohort.truth[record.line - 2];
    ASSERT_FALSE(truth.incomplete);
    EXPECT_EQ(cohort::LabelSurvival(record, schema), truth.label);
    EXPECT_EQ(schema.MapStage(record.stage_code), truth.stage);
    excluded += truth.label == SurvivalLabel::kExcluded ? 1 : 0;
    ++checked;
  }
  EXPECT_EQ(checked, parsed.records.size());
  EXPECT_GT(excluded, 0u);
}

TEST(SynthTest, BackFillHandlesCustomCauseCodes) {
  const FeatureSchema schema(
      {{"Age", cohort::FeatureKind::kNumeric, ""},
       {"Grade", cohort::FeatureKind::kOrdinal, ""},
       {"Sex", cohort::FeatureKind::kNominal, ""}},
      {"Vital", "Months", "Cause"}, "Stage",
      {{"L", Stage::kLocalized}, {"R", Stage::kRegional}, {"D", Stage::kDistant}},
      "Lung", {"Lung and Bronchus", "Other Cause of Death"});
  SynthSpec spec;
  spec.n_per_stage = 300;
  spec.excluded_fraction = 0.5;
  spec.coefficients.fill({{"Grade", 1.0}});
  const SynthCohort cohort = GenerateSynth(spec, schema);
  const auto parsed = cohort::ParseDataset(cohort.csv, schema);
  ASSERT_EQ(parsed.records.size(), cohort.truth.size());
  for (size_t i = 0; i < parsed.records.size(); ++i) {
    ASSERT_EQ(cohort::LabelSurvival(parsed.records[i], schema),
              cohort.truth[i].label);
  }
}

TEST(SynthTest, RejectsUnknownAndNominalCoefficients) {
  SynthSpec spec;
  spec.coefficients[1] = {{"Shoe Size", 1.0}};
  EXPECT_THROW(GenerateSynth(spec, FeatureSchema::Default()), ConfigError);
  spec.coefficients[1] = {{"Sex", 1.0}};
  EXPECT_THROW(GenerateSynth(spec, FeatureSchema::Default()), ConfigError);
}

TEST(SynthTest, PlantedSignalHasOracleAucNearNinety) {
  const SynthCohort cohort =
      GenerateSynth(SynthSpec::Planted(5000, 2026), FeatureSchema::Default());
  for (const Stage stage : cohort::kAllStages) {
    const double auc = GeneratorOracleAuc(cohort, stage);
    EXPECT_GT(auc, 0.88) << cohort::StageSlug(stage);
    EXPECT_LT(auc, 0.92) << cohort::StageSlug(stage);
  }
  EXPECT_NEAR(SurvivalRate(cohort), 0.5, 0.03);
}

TEST(SynthTest, SameSeedSameBytes) {
  const auto a = GenerateSynth(SynthSpec::Planted(300, 4), FeatureSchema::Default());
  const auto b = GenerateSynth(SynthSpec::Planted(300, 4), FeatureSchema::Default());
  const auto c = GenerateSynth(SynthSpec::Planted(300, 5), FeatureSchema::Default());
  EXPECT_EQ(a.csv, b.csv);
  EXPECT_NE(a.csv, c.csv);
}

TEST(SynthTest, SpecJsonForms) {
  const SynthSpec shared = SynthSpec::FromJson(
      {{"n_per_stage", 10}, {"coefficients", {{"Age", 1.5}}}}, 77);
  EXPECT_EQ(shared.seed, 77u);
  for (const auto& stage : shared.coefficients) {
    EXPECT_EQ(stage, (std::map<std::string, double>{{"Age", 1.5}}));
  }
  const SynthSpec staged = SynthSpec::FromJson(
      {{"seed", 3}, {"coefficients", {{"distant", {{"Tumor Size", -1.0}}}}}}, 77);
  EXPECT_EQ(staged.seed, 3u);
  EXPECT_TRUE(staged.coefficients[0].empty());
  EXPECT_EQ(staged.coefficients[2].at("Tumor Size"), -1.0);
  const SynthSpec planted = SynthSpec::FromJson(json::object(), 1);
  EXPECT_EQ(planted.coefficients, SynthSpec::Planted(10, 1).coefficients);
  const SynthSpec again = SynthSpec::FromJson(staged.ToJson(), 0);
  EXPECT_EQ(again.coefficients, staged.coefficients);
  EXPECT_THROW(SynthSpec::FromJson({{"base_rate", 1.0}}, 0), ConfigError);
  EXPECT_THROW(SynthSpec::FromJson({{"n_per_stage", "many"}}, 0), ConfigError);
}

TEST(ConfigTest, SeedIsMandatory) {
  EXPECT_THROW(RunConfig::FromJson(json::object(), ""), ConfigError);
  EXPECT_EQ(RunConfig::FromJson(json::object(), "", 12).seed, 12u);
  EXPECT_EQ(RunConfig::FromJson({{"seed", 4}}, "", 12).seed, 12u);
  EXPECT_THROW(RunConfig::FromJson({{"seed", -4}}, ""), ConfigError);
}

TEST(ConfigTest, DefaultsMirrorTheDefaultGrids) {
  const RunConfig config = RunConfig::FromJson({{"seed", 1}}, "");
  EXPECT_EQ(config.k_folds, 5);
  EXPECT_EQ(config.learners.size(), 4u);
  EXPECT_EQ(config.stages.size(), 3u);
  EXPECT_EQ(config.explain.top_k, 5u);
  for (const auto learner : learners::kAllLearners) {
    EXPECT_EQ(config.grids.at(learner).ToJson(),
              selection::HyperGrid::Default(learner).ToJson());
  }
  EXPECT_EQ(config.ExplainLearner(), learners::Learner::kSymGbdt);
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(RunConfig::FromJson({{"seed", 1}, {"k_fold", 5}}, ""), ConfigError);
  EXPECT_THROW(RunConfig::FromJson({{"seed", 1}, {"k_folds", 1}}, ""), ConfigError);
  EXPECT_THROW(RunConfig::FromJson({{"seed", 1}, {"learners", {"svm"}}}, ""),
               ConfigError);
  EXPECT_THROW(
      RunConfig::FromJson({{"seed", 1}, {"explain", {{"kernel_width", 1}}}}, ""),
      ConfigError);
  EXPECT_THROW(RunConfig::FromJson({{"seed", 1}, {"input", "a.csv"},
                                    {"synth", json::object()}},
                                   ""),
               ConfigError);
  EXPECT_THROW(RunConfig::FromJson({{"seed", 1}, {"grids", {{"lr", {{"C", json::array()}}}}}},
                                   ""),
               ConfigError);
}

TEST(ConfigTest, PathsResolveAgainstTheConfigDirectory) {
  TempDir dir;
  const json schema = FeatureSchema::Default("Breast").ToJson();
  WriteFile(dir.path() / "schema.json", schema.dump());
  WriteFile(dir.path() / "run.json",
            json{{"seed", 3},
                 {"input", "cohort.csv"},
                 {"schema", "schema.json"},
                 {"out", "results"}}
                .dump());
  const RunConfig config = RunConfig::Load(dir.path() / "run.json");
  EXPECT_EQ(*config.input, dir.path() / "cohort.csv");
  EXPECT_EQ(config.out, dir.path() / "results");
  EXPECT_EQ(config.schema->cancer_type(), "Breast");
  EXPECT_THROW(RunConfig::Load(dir.path() / "missing.json"), ConfigError);
}

TEST(ConfigTest, CancerTypeOverridesTheSchema) {
  const RunConfig config =
      RunConfig::FromJson({{"seed", 1}, {"cancer_type", "Lung"}}, "");
  EXPECT_EQ(config.schema->cancer_type(), "Lung");
  EXPECT_TRUE(config.schema->CauseMatches("Lung"));
  json inline_schema = FeatureSchema::Default().ToJson();
  inline_schema.erase("cause_of_death_codes");
  const RunConfig inline_config = RunConfig::FromJson(
      {{"seed", 1}, {"schema", inline_schema}, {"cancer_type", "Prostate"}}, "");
  EXPECT_TRUE(inline_config.schema->CauseMatches("Prostate"));
}

TEST(ConfigTest, EffectiveConfigRoundTrips) {
  json original = FastConfigJson(21, 50);
  original["stages"] = {"regional", "distant"};
  original["learners"] = "all";
  original["threads"] = 2;
  const RunConfig config = RunConfig::FromJson(original, "");
  const json effective = config.ToJson();
  EXPECT_EQ(RunConfig::FromJson(effective, "").ToJson(), effective);
  EXPECT_EQ(effective.at("stages"), json({"regional", "distant"}));
}

TEST(ConfigTest, SelectionParsing) {
  EXPECT_EQ(ParseStageSelection("all").size(), 3u);
  EXPECT_EQ(ParseStageSelection("distant"), std::vector<Stage>{Stage::kDistant});
  EXPECT_EQ(ParseLearnerSelection("ada"),
            std::vector<learners::Learner>{learners::Learner::kAdaBoost});
  EXPECT_THROW(ParseStageSelection("metastatic"), ConfigError);
  EXPECT_THROW(ParseLearnerSelection("xgb"), ConfigError);
}

TEST(ManifestTest, Sha256KnownVectors) {
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RunTest, SynthRunListsEveryStageArtifact) {
  TempDir dir;
  json config_json = FastConfigJson(31, 150);
  config_json["out"] = dir.path().string();
  const RunConfig config = RunConfig::FromJson(config_json, "");
  const RunResult result = RunPipeline(config, kStepAll);
  EXPECT_FALSE(result.partial());

  const json manifest = json::parse(ReadFile(dir.path() / "manifest.json"));
  EXPECT_EQ(manifest.at("format"), kManifestFormat);
  EXPECT_EQ(manifest.at("seed"), 31);
  EXPECT_TRUE(manifest.at("excluded").contains("timestamp"));
  const json& files = manifest.at("files");
  for (const Stage stage : cohort::kAllStages) {
    const std::string slug(cohort::StageSlug(stage));
    EXPECT_EQ(manifest.at("stages").at(slug).at("status"), "ok");
    size_t in_dir = 0;
    for (const auto& entry : fs::directory_iterator(dir.path() / slug)) {
      (void)entry;
      ++in_dir;
    }
    EXPECT_EQ(in_dir, kStageFiles.size()) << slug;
    for (const std::string& name : kStageFiles) {
      EXPECT_TRUE(files.contains(slug + "/" + name)) << slug << "/" << name;
    }
    for (const auto learner : learners::kAllLearners) {
      EXPECT_TRUE(files.contains(
          fmt::format("roc/{}_{}.tsv", slug, learners::LearnerTag(learner))));
    }
  }
  for (const char* name :
       {"cohort.csv", "synth_truth.tsv", "cleaning_report.txt", "stage_split.txt",
        "metrics_table.csv", "metrics_table.txt", "shap_presence.tsv",
        "lime_presence.tsv", "group_stats_table.csv", "group_stats_table.txt"}) {
    EXPECT_TRUE(files.contains(name)) << name;
  }
  EXPECT_FALSE(files.contains("manifest.json"));

  // Every regular file is listed with its current hash.
  size_t listed = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir.path())) {
    if (!entry.is_regular_file()) continue;
    const std::string relative =
        fs::relative(entry.path(), dir.path()).generic_string();
    if (relative == "manifest.json") continue;
    ASSERT_TRUE(files.contains(relative)) << relative;
    EXPECT_EQ(files.at(relative), Sha256Hex(ReadFile(entry.path())));
    ++listed;
  }
  EXPECT_EQ(listed, files.size());
}

TEST(RunTest, RepeatedRunsHashIdenticallyAcrossThreadCounts) {
  TempDir a, b;
  json config_json = FastConfigJson(8, 120);
  config_json["out"] = a.path().string();
  config_json["threads"] = 1;
  const RunResult first = RunPipeline(RunConfig::FromJson(config_json, ""), kStepAll);
  config_json["out"] = b.path().string();
  config_json["threads"] = 3;
  const RunResult second = RunPipeline(RunConfig::FromJson(config_json, ""), kStepAll);
  EXPECT_EQ(first.hashes, second.hashes);
}

TEST(RunTest, SeparateStepsMatchTheFullRun) {
  TempDir full, split;
  json config_json = FastConfigJson(17, 120);
  config_json["out"] = full.path().string();
  const RunResult whole = RunPipeline(RunConfig::FromJson(config_json, ""), kStepAll);
  config_json["out"] = split.path().string();
  const RunConfig config = RunConfig::FromJson(config_json, "");
  for (const unsigned step :
       {kStepIngest, kStepTrain, kStepEvaluate, kStepExplain, kStepReport}) {
    RunPipeline(config, step, "step");
  }
  const RunResult last = RunPipeline(config, kStepReport, "report");
  EXPECT_EQ(whole.hashes, last.hashes);
}

TEST(RunTest, ExplainWithoutTrainSearchesTheExplainedLearner) {
  TempDir dir;
  json config_json = FastConfigJson(2, 100);
  config_json["out"] = dir.path().string();
  config_json["learners"] = {"lr"};
  const RunResult result =
      RunPipeline(RunConfig::FromJson(config_json, ""), kStepExplain, "explain");
  EXPECT_FALSE(result.partial());
  EXPECT_TRUE(result.hashes.contains("localized/shap_ranking.tsv"));
  EXPECT_FALSE(result.hashes.contains("localized/best_models.json"));
  const json lime =
      json::parse(ReadFile(dir.path() / "localized" / "lime_case.json"));
  EXPECT_EQ(lime.at("learner"), "lr");
}

// Keeps every localized and regional row but only eight distant ones, three
// of them non-survivors.
std::string TinyDistantCohort(const SynthCohort& cohort) {
  std::istringstream lines(cohort.csv);
  std::string line, out;
  std::getline(lines, line);
  out = line + "\n";
  size_t distant_survived = 0, distant_died = 0;
  for (const SynthRow& row : cohort.truth) {
    std::getline(lines, line);
    if (row.stage == Stage::kDistant) {
      if (row.incomplete || row.label == SurvivalLabel::kExcluded) continue;
      size_t& count = row.label == SurvivalLabel::kSurvived ? distant_survived
                                                            : distant_died;
      const size_t limit = row.label == SurvivalLabel::kSurvived ? 5 : 3;
      if (count == limit) continue;
      ++count;
    }
    out += line + "\n";
  }
  return out;
}

TEST(RunTest, UndersizedStageIsSkippedOthersComplete) {
  TempDir dir;
  const SynthCohort cohort =
      GenerateSynth(SynthSpec::Planted(150, 6), FeatureSchema::Default());
  WriteFile(dir.path() / "cohort.csv", TinyDistantCohort(cohort));
  json config_json = FastConfigJson(6, 0);
  config_json.erase("synth");
  config_json["input"] = "cohort.csv";
  config_json["out"] = "out";
  const RunConfig config = RunConfig::FromJson(config_json, dir.path());
  const RunResult result = RunPipeline(config, kStepAll);
  ASSERT_EQ(result.stages.size(), 3u);
  EXPECT_TRUE(result.partial());
  EXPECT_EQ(result.stages[0].status, StageStatus::kOk);
  EXPECT_EQ(result.stages[1].status, StageStatus::kOk);
  EXPECT_EQ(result.stages[2].status, StageStatus::kSkipped);
  EXPECT_EQ(result.stages[2].rows, 8u);
  EXPECT_NE(result.stages[2].message.find("fewer than"), std::string::npos);

  const json manifest = json::parse(ReadFile(dir.path() / "out" / "manifest.json"));
  EXPECT_EQ(manifest.at("stages").at("distant").at("status"), "skipped");
  const std::string table = ReadFile(dir.path() / "out" / "metrics_table.csv");
  EXPECT_NE(table.find("Distant"), std::string::npos);
  EXPECT_TRUE(result.hashes.contains("localized/lime_case.json"));
  EXPECT_FALSE(result.hashes.contains("distant/lime_case.json"));
  // Presence matrices only cover the explained stages.
  const std::string presence = ReadFile(dir.path() / "out" / "shap_presence.tsv");
  EXPECT_EQ(presence.find("Distant"), std::string::npos);
}

TEST(RunTest, InputProblemsThrowBeforeAnyStage) {
  TempDir dir;
  json config_json = {{"seed", 1}, {"input", "absent.csv"}, {"out", "out"}};
  EXPECT_THROW(RunPipeline(RunConfig::FromJson(config_json, dir.path()), kStepAll),
               ConfigError);
  WriteFile(dir.path() / "bad.csv", "Age,Sex\n1,Male\n");
  config_json["input"] = "bad.csv";
  EXPECT_THROW(RunPipeline(RunConfig::FromJson(config_json, dir.path()), kStepAll),
               SchemaError);
  EXPECT_THROW(RunPipeline(RunConfig::FromJson({{"seed", 1}}, dir.path()), kStepAll),
               ConfigError);
}

int ExitCode(const std::string& args) {
  const std::string command =
      fmt::format("{} {} > /dev/null 2>&1", STAGESURV_CLI, args);
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, ExitCodes) {
  TempDir dir;
  const fs::path out = dir.path() / "out";
  EXPECT_EQ(ExitCode("run"), 2);  // No seed.
  EXPECT_EQ(ExitCode("frobnicate --seed 1"), 2);
  EXPECT_EQ(ExitCode(fmt::format("run --seed 1 --out {}", out.string())), 2);
  EXPECT_EQ(ExitCode(fmt::format("synth --seed 1 --stage all --out {}",
                                 out.string())),
            0);
  EXPECT_TRUE(fs::exists(out / "cohort.csv"));
  EXPECT_TRUE(fs::exists(out / "manifest.json"));

  WriteFile(dir.path() / "unmapped.json",
            json{{"seed", 1}, {"input", "unmapped.csv"}, {"out", "o2"}}.dump());
  std::string text = ReadFile(out / "cohort.csv");
  const size_t pos = text.find(",Localized,");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 11, ",Stage IV,");
  WriteFile(dir.path() / "unmapped.csv", text);
  EXPECT_EQ(ExitCode(fmt::format("ingest --config {}",
                                 (dir.path() / "unmapped.json").string())),
            3);

  WriteFile(dir.path() / "tiny.csv",
            TinyDistantCohort(GenerateSynth(SynthSpec::Planted(60, 3),
                                            FeatureSchema::Default())));
  json tiny = FastConfigJson(3, 0);
  tiny.erase("synth");
  tiny["input"] = "tiny.csv";
  tiny["out"] = "o3";
  WriteFile(dir.path() / "tiny.json", tiny.dump());
  EXPECT_EQ(ExitCode(fmt::format("evaluate --config {} --learner lr",
                                 (dir.path() / "tiny.json").string())),
            4);
  EXPECT_EQ(ExitCode(fmt::format("evaluate --config {} --learner lr --stage "
                                 "regional",
                                 (dir.path() / "tiny.json").string())),
            0);
  EXPECT_EQ(ExitCode(fmt::format("evaluate --config {} --stage stage4",
                                 (dir.path() / "tiny.json").string())),
            2);
}

}  // namespace
}  // namespace stagesurv::pipeline
