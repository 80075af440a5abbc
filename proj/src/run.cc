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


#include "stagesurv/pipeline/run.h"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>

#include "fmt/chrono.h"
#include "fmt/format.h"
#include "stagesurv/attribution/lime.h"
#include "stagesurv/attribution/players.h"
#include "stagesurv/attribution/presence.h"
#include "stagesurv/attribution/shapley.h"
#include "stagesurv/cohort/records.h"
#include "stagesurv/cohort/table.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/common/random.h"
#include "stagesurv/learners/model.h"
#include "stagesurv/selection/evaluation.h"
#include "stagesurv/selection/metrics.h"
#include "stagesurv/stats/group_stats.h"

namespace stagesurv::pipeline {

namespace fs = std::filesystem;
using cohort::CohortTable;
using cohort::LabeledRecord;
using cohort::Stage;
using learners::Learner;
using learners::TrainedModel;
using nlohmann::json;

namespace {

constexpr std::string_view kBestModelsFile = "best_models.json";

class RunDirectory {
 public:
  explicit RunDirectory(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) {
      throw ConfigError(fmt::format("cannot create output directory {}: {}",
                                    root_.string(), ec.message()));
    }
  }

  const fs::path& root() const { return root_; }

  void Write(const std::string& relative, std::string_view content) const {
    const fs::path path = root_ / relative;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  }

  std::optional<std::string> Read(const std::string& relative) const {
    std::ifstream in(root_ / relative, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  // Every file except the manifest, keyed by generic relative path.
  std::map<std::string, std::string> Hashes() const {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root_)) {
      if (!entry.is_regular_file()) continue;
      const std::string relative =
          fs::relative(entry.path(), root_).generic_string();
      if (relative == kManifestFile) continue;
      out[relative] = Sha256Hex(*Read(relative));
    }
    return out;
  }

 private:
  fs::path root_;
};

std::string ReadInput(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read input {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string RocTsv(std::span<const selection::RocPoint> points) {
  std::string out = "fpr\ttpr\n";
  for (const auto& p : points) out += fmt::format("{:.6f}\t{:.6f}\n", p.fpr, p.tpr);
  return out;
}

json MetricsJson(const selection::MetricsRow& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision},
          {"recall", m.recall},     {"f1", m.f1},
          {"auc", m.auc},           {"threshold", m.threshold}};
}

std::string StageLabel(const cohort::FeatureSchema& schema, Stage stage) {
  return fmt::format("{} {}", schema.cancer_type(), cohort::StageName(stage));
}

// Choices the workflow leaves open, recorded so each run describes itself.
json DocumentedDefaults(const RunConfig& config) {
  return {
      {"positive_class", "survived (label 1)"},
      {"decision_threshold", config.threshold},
      {"stage_column", "stratifies the cohort; not a predictor"},
      {"encoding",
       "nominal features one-hot over sorted categories, ordinal codes as "
       "given, numeric features z-scored per stage and again per training "
       "fold"},
      {"folds",
       "stratified; each class shuffled and dealt round-robin; fold seed "
       "derived from (seed, stage)"},
      {"selection_rule", "highest mean fold AUC, earliest grid point on ties"},
      {"final_models", "selected config refitted on the whole stage cohort"},
      {"roc_curves", "vertical average of fold curves on 101 FPR points"},
      {"shap",
       "interventional Kernel SHAP, one player per schema feature, "
       "background sampled from the stage cohort"},
      {"lime_case", "lowest predicted survival probability, first row on ties"},
      {"presence_top_k", config.explain.top_k},
      {"group_stats", "two-sided Welch t-test on raw numeric features"},
  };
}

struct StageWork {
  StageOutcome outcome;
  std::optional<selection::StageEvaluation> evaluation;
  std::optional<attribution::PresenceColumn> shap_column;
  std::optional<attribution::PresenceColumn> lime_column;
  std::optional<stats::GroupStatsBlock> block;
};

class StageRunner {
 public:
  StageRunner(const RunConfig& config, unsigned steps, const RunDirectory& dir,
              Stage stage, std::span<const LabeledRecord> records)
      : config_(config),
        steps_(steps),
        dir_(dir),
        stage_(stage),
        slug_(cohort::StageSlug(stage)),
        records_(records),
        stage_seed_(DeriveSeed(config.seed,
                               kStreamStage + static_cast<uint64_t>(stage))) {
    work_.outcome.stage = stage;
    work_.outcome.rows = records.size();
    for (const auto& r : records) work_.outcome.survivors += r.survived ? 1 : 0;
  }

  StageWork Run() {
    try {
      RunSteps();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      work_.outcome.status = StageStatus::kFailed;
      work_.outcome.message = e.what();
    }
    return std::move(work_);
  }

 private:
  void Emit(std::string name, std::string_view content) {
    const std::string relative = slug_ + "/" + name;
    dir_.Write(relative, content);
    work_.outcome.files.push_back(relative);
  }

  void Skip(std::string reason) {
    work_.outcome.status = StageStatus::kSkipped;
    work_.outcome.message = std::move(reason);
  }

  void RunSteps() {
    if (records_.empty()) {
      Skip("no labeled records in this stage");
      return;
    }
    const CohortTable table = cohort::Encode(records_, config_.schema);
    if (steps_ & kStepIngest) {
      Emit("correlation.tsv", cohort::ComputeCorrelation(table).ToTsv());
    }
    if (steps_ & kStepReport) {
      stats::GroupStatsBlock block{config_.schema->cancer_type(),
                                   std::string(cohort::StageName(stage_)),
                                   stats::CompareGroups(table)};
      const std::span<const stats::GroupStatsBlock> one(&block, 1);
      Emit("group_stats.csv", stats::GroupStatsCsv(one));
      Emit("group_stats.txt", stats::GroupStatsText(one));
      work_.block = std::move(block);
    }
    if (steps_ & (kStepTrain | kStepEvaluate)) {
      if (!TrainAndEvaluate(table)) return;
    }
    if (steps_ & kStepExplain) Explain(table);
  }

  // False when the stage cohort cannot be cross-validated.
  bool TrainAndEvaluate(const CohortTable& table) {
    const selection::StageEvaluation& eval =
        work_.evaluation.emplace(selection::EvaluateStage(
            table, stage_, config_.learners, config_.Stagewise()));
    if (eval.skipped) {
      Skip(eval.skip_reason);
      return false;
    }
    if (steps_ & kStepTrain) {
      Emit("grid_search.csv", selection::GridResultsCsv(eval.results));
      json models = json::array();
      for (const selection::GridResult& result : eval.results) {
        const TrainedModel& model =
            fitted_.insert_or_assign(result.learner, FitBest(table, result))
                .first->second;
        models.push_back({{"learner", learners::LearnerTag(result.learner)},
                          {"grid_index", result.best_index},
                          {"cv_mean", MetricsJson(result.best().mean)},
                          {"model", model.ToJson()}});
      }
      const json doc = {{"stage", slug_},
                        {"k", eval.plan.k},
                        {"seed", config_.seed},
                        {"columns", table.ColumnNames()},
                        {"models", std::move(models)}};
      Emit(std::string(kBestModelsFile), doc.dump(2) + "\n");
    }
    if (steps_ & kStepEvaluate) {
      Emit("metrics.csv", selection::BuildMetricsTable(
                              std::span(&eval, 1), config_.learners)
                              .ToCsv());
      for (const selection::GridResult& result : eval.results) {
        const std::string relative = fmt::format(
            "roc/{}_{}.tsv", slug_, learners::LearnerTag(result.learner));
        dir_.Write(relative,
                   RocTsv(selection::AverageRoc(result.best_fold_curves)));
        work_.outcome.files.push_back(relative);
      }
    }
    return true;
  }

  TrainedModel FitBest(const CohortTable& table,
                       const selection::GridResult& result) const {
    return learners::Fit(result.best().config, table.rows(), table.labels(), {},
                         config_.threads);
  }

  // The explained model: fitted in this run, else read back from an earlier
  // train step, else grid-searched now.
  std::optional<TrainedModel> ExplainedModel(const CohortTable& table,
                                             Learner learner) {
    if (const auto it = fitted_.find(learner); it != fitted_.end()) {
      return it->second;
    }
    if (const auto text = dir_.Read(slug_ + "/" + std::string(kBestModelsFile))) {
      try {
        const json doc = json::parse(*text);
        if (doc.at("columns").get<std::vector<std::string>>() !=
            table.ColumnNames()) {
          throw DataError(fmt::format(
              "{}/{} was trained on different columns; rerun train", slug_,
              kBestModelsFile));
        }
        for (const json& entry : doc.at("models")) {
          if (entry.at("learner").get<std::string>() ==
              learners::LearnerTag(learner)) {
            return TrainedModel::FromJson(entry.at("model"));
          }
        }
      } catch (const json::exception& e) {
        throw DataError(fmt::format("unreadable {}/{}: {}", slug_,
                                    kBestModelsFile, e.what()));
      }
    }
    const Learner only[] = {learner};
    const selection::StageEvaluation eval =
        selection::EvaluateStage(table, stage_, only, config_.Stagewise());
    if (eval.skipped) {
      Skip(eval.skip_reason);
      return std::nullopt;
    }
    return FitBest(table, eval.results.front());
  }

  void Explain(const CohortTable& table) {
    const Learner learner = config_.ExplainLearner();
    const std::optional<TrainedModel> model = ExplainedModel(table, learner);
    if (!model) return;
    if (model->feature_count() != table.num_columns()) {
      throw DataError(fmt::format("model expects {} columns, stage has {}",
                                  model->feature_count(), table.num_columns()));
    }
    const ExplainSettings& settings = config_.explain;
    const attribution::ModelFn f = [&model](std::span<const double> row) {
      return model->PredictProba(row);
    };
    const attribution::PlayerGroups players =
        attribution::PlayerGroups::FromTable(table);
    const std::string label = StageLabel(*config_.schema, stage_);

    const attribution::BackgroundSet background =
        attribution::BackgroundSet::Sample(table.rows(), settings.background_size,
                                           stage_seed_);
    attribution::ShapOptions shap_options;
    shap_options.kernel_samples = settings.kernel_samples;
    shap_options.max_instances = settings.summary_instances;
    shap_options.seed = stage_seed_;
    shap_options.threads = config_.threads;
    const attribution::ShapSummary summary =
        attribution::SummarizeShap(f, table, background, players, shap_options);
    Emit("shap_ranking.tsv", summary.RankingTsv());
    Emit("shap_beeswarm.tsv", summary.BeeswarmTsv());
    work_.shap_column = attribution::PresenceColumn{
        label, summary.Top(settings.top_k), players.size()};

    const attribution::LimeStats lime_stats =
        attribution::LimeStats::Fit(table.rows(), players);
    const std::vector<double> scores = model->PredictProba(table.rows());
    std::vector<size_t> cases = {attribution::SelectLimeCase(scores)};
    if (settings.lime_aggregate_cases > 0) {
      cases = attribution::LowestScoring(scores, settings.lime_aggregate_cases);
    }
    std::vector<attribution::LocalExplanation> explanations;
    for (const size_t row : cases) {
      attribution::LimeOptions options;
      options.n_samples = settings.lime_samples;
      options.top_k = settings.top_k;
      options.kernel_width_factor = settings.kernel_width_factor;
      options.ridge = settings.lime_ridge;
      options.seed = DeriveSeed(stage_seed_, kStreamLime + row);
      explanations.push_back(attribution::LimeExplain(
          f, table.rows().row(row), row, lime_stats, players, options));
    }

    const size_t case_row = cases.front();
    const cohort::RawRecord& record = records_[case_row].record;
    json features = json::object();
    for (size_t i = 0; i < config_.schema->size(); ++i) {
      features[config_.schema->features()[i].name] = record.values[i];
    }
    json doc = {
        {"stage", slug_},
        {"learner", learners::LearnerTag(learner)},
        {"model_config", model->config().ParamsJson()},
        {"case",
         {{"row", case_row},
          {"source_line", record.line},
          {"survival_probability", scores[case_row]},
          {"observed", records_[case_row].survived ? "survived" : "not survived"},
          {"features", std::move(features)}}},
        {"explanation", explanations.front().ToJson()},
        {"settings",
         {{"n_samples", settings.lime_samples},
          {"top_k", settings.top_k},
          {"kernel_width_factor", settings.kernel_width_factor},
          {"ridge", settings.lime_ridge}}}};
    std::vector<std::string> lime_top;
    if (settings.lime_aggregate_cases > 0) {
      lime_top = attribution::AggregateTopFeatures(explanations, settings.top_k);
      json per_case = json::array();
      for (const auto& e : explanations) per_case.push_back(e.ToJson());
      doc["aggregate"] = {{"cases", cases},
                          {"top_features", lime_top},
                          {"explanations", std::move(per_case)}};
    } else {
      for (const auto& w : explanations.front().top_features) {
        lime_top.push_back(w.name);
      }
    }
    Emit("lime_case.json", doc.dump(2) + "\n");
    work_.lime_column =
        attribution::PresenceColumn{label, std::move(lime_top), players.size()};
  }

  const RunConfig& config_;
  unsigned steps_;
  const RunDirectory& dir_;
  Stage stage_;
  std::string slug_;
  std::span<const LabeledRecord> records_;
  uint64_t stage_seed_;
  std::map<Learner, TrainedModel> fitted_;
  StageWork work_;
};

json StepNames(unsigned steps) {
  json out = json::array();
  const std::pair<Step, const char*> names[] = {
      {kStepIngest, "ingest"},     {kStepTrain, "train"},
      {kStepEvaluate, "evaluate"}, {kStepExplain, "explain"},
      {kStepReport, "report"}};
  for (const auto& [step, name] : names) {
    if (steps & step) out.push_back(name);
  }
  return out;
}

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

RunResult Finish(const RunConfig& config, const RunDirectory& dir,
                 std::string_view command, unsigned steps, json input,
                 std::vector<StageOutcome> stages) {
  RunResult result;
  result.out = dir.root();
  result.stages = std::move(stages);
  result.hashes = dir.Hashes();
  json stage_json = json::object();
  for (const StageOutcome& s : result.stages) {
    stage_json[std::string(cohort::StageSlug(s.stage))] = {
        {"status", StageStatusName(s.status)},
        {"message", s.message},
        {"rows", s.rows},
        {"survivors", s.survivors},
        {"files", s.files}};
  }
  const json manifest = {{"format", kManifestFormat},
                         {"version", 1},
                         {"command", command},
                         {"steps", StepNames(steps)},
                         {"seed", config.seed},
                         {"config", config.ToJson()},
                         {"defaults", DocumentedDefaults(config)},
                         {"input", std::move(input)},
                         {"stages", std::move(stage_json)},
                         {"files", result.hashes},
                         {"excluded", {{"timestamp", Timestamp()}}}};
  dir.Write(std::string(kManifestFile), manifest.dump(2) + "\n");
  return result;
}

SynthSpec SynthFor(const RunConfig& config) {
  if (config.synth) return *config.synth;
  return SynthSpec::Planted(2000, DeriveSeed(config.seed, kStreamSynth));
}

}  // namespace

std::string_view StageStatusName(StageStatus status) {
  switch (status) {
    case StageStatus::kOk:
      return "ok";
    case StageStatus::kSkipped:
      return "skipped";
    case StageStatus::kFailed:
      return "failed";
  }
  return "?";
}

bool RunResult::partial() const {
  for (const StageOutcome& s : stages) {
    if (s.status != StageStatus::kOk) return true;
  }
  return false;
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string out;
  for (unsigned int i = 0; i < length; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

RunResult WriteSynthCohort(const RunConfig& config) {
  const RunDirectory dir(config.out);
  const SynthSpec spec = SynthFor(config);
  const SynthCohort cohort = GenerateSynth(spec, *config.schema);
  dir.Write("cohort.csv", cohort.csv);
  dir.Write("synth_truth.tsv", cohort.TruthTsv());
  return Finish(config, dir, "synth", 0,
                {{"source", "synth"}, {"synth", spec.ToJson()},
                 {"rows", cohort.truth.size()}},
                {});
}

RunResult RunPipeline(const RunConfig& config, unsigned steps,
                      std::string_view command) {
  const RunDirectory dir(config.out);
  const cohort::FeatureSchema& schema = *config.schema;
  std::string text;
  json input;
  if (config.input) {
    text = ReadInput(*config.input);
    input["source"] = config.input->generic_string();
  } else if (config.synth) {
    SynthCohort cohort = GenerateSynth(*config.synth, schema);
    dir.Write("cohort.csv", cohort.csv);
    dir.Write("synth_truth.tsv", cohort.TruthTsv());
    text = std::move(cohort.csv);
    input["source"] = "synth";
  } else {
    throw ConfigError("config needs an input path or a synth spec");
  }

  cohort::ParseResult parsed = cohort::ParseDataset(text, schema);
  const std::string parse_report = parsed.Report();
  input["rows"] = parsed.total_rows;
  input["dropped"] = parsed.dropped.size();
  cohort::LabelingResult labeled =
      cohort::LabelRecords(std::move(parsed.records), schema);
  size_t survived = 0;
  for (const auto& r : labeled.records) survived += r.survived ? 1 : 0;
  input["excluded"] = labeled.excluded;
  input["labeled"] = labeled.records.size();
  const cohort::StageSplit split = cohort::SplitByStage(labeled.records, schema);

  if (steps & kStepIngest) {
    dir.Write("cleaning_report.txt",
              parse_report +
                  fmt::format("labeled: {} ({} survived, {} not survived)\n"
                              "excluded by the five-year rule: {}\n",
                              labeled.records.size(), survived,
                              labeled.records.size() - survived,
                              labeled.excluded));
    std::string lines;
    for (const auto& line : split.ReportLines()) lines += line + "\n";
    dir.Write("stage_split.txt", lines);
  }

  std::vector<StageWork> works;
  for (const Stage stage : config.stages) {
    works.push_back(StageRunner(config, steps, dir, stage, split[stage]).Run());
  }

  if (steps & kStepEvaluate) {
    std::vector<selection::StageEvaluation> evaluations;
    for (const StageWork& w : works) {
      if (w.evaluation) {
        evaluations.push_back(*w.evaluation);
        continue;
      }
      selection::StageEvaluation missing;
      missing.stage = w.outcome.stage;
      missing.skipped = true;
      missing.skip_reason = w.outcome.message;
      evaluations.push_back(std::move(missing));
    }
    const selection::MetricsTable table =
        selection::BuildMetricsTable(evaluations, config.learners);
    dir.Write("metrics_table.csv", table.ToCsv());
    dir.Write("metrics_table.txt", table.ToText());
  }

  if (steps & kStepExplain) {
    std::vector<attribution::PresenceColumn> shap, lime;
    for (const StageWork& w : works) {
      if (w.shap_column) shap.push_back(*w.shap_column);
      if (w.lime_column) lime.push_back(*w.lime_column);
    }
    if (!shap.empty()) {
      dir.Write("shap_presence.tsv",
                attribution::BuildPresenceMatrix(shap, config.explain.top_k)
                    .ToTsv());
    }
    if (!lime.empty()) {
      dir.Write("lime_presence.tsv",
                attribution::BuildPresenceMatrix(lime, config.explain.top_k)
                    .ToTsv());
    }
  }

  if (steps & kStepReport) {
    std::vector<stats::GroupStatsBlock> blocks;
    if (!labeled.records.empty()) {
      const CohortTable all = cohort::Encode(labeled.records, config.schema);
      blocks.push_back(
          {schema.cancer_type(), "All stages", stats::CompareGroups(all)});
    }
    for (const StageWork& w : works) {
      if (w.block) blocks.push_back(*w.block);
    }
    dir.Write("group_stats_table.csv", stats::GroupStatsCsv(blocks));
    dir.Write("group_stats_table.txt", stats::GroupStatsText(blocks));
  }

  std::vector<StageOutcome> outcomes;
  for (StageWork& w : works) outcomes.push_back(std::move(w.outcome));
  return Finish(config, dir, command, steps, std::move(input),
                std::move(outcomes));
}

}  // namespace stagesurv::pipeline
