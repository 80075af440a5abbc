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


// Command-line front end: one subcommand per pipeline step plus `run`.

#include <cstdint>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/pipeline/config.h"
#include "stagesurv/pipeline/run.h"

namespace {

using stagesurv::pipeline::RunConfig;
using stagesurv::pipeline::RunResult;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitPartial = 4;

struct Flags {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  std::string stage;
  std::string learner;
};

struct Command {
  const char* name;
  const char* description;
  unsigned steps;
};

constexpr Command kCommands[] = {
    {"synth", "Generate a synthetic cohort with planted signal", 0},
    {"ingest", "Clean, label and stage-split the cohort; correlation matrices",
     stagesurv::pipeline::kStepIngest},
    {"train", "Grid-search every learner and store the selected models",
     stagesurv::pipeline::kStepTrain},
    {"evaluate", "Cross-validated metrics, ROC curves and the metrics table",
     stagesurv::pipeline::kStepEvaluate},
    {"explain", "SHAP summaries, LIME case reports and presence matrices",
     stagesurv::pipeline::kStepExplain},
    {"report", "Survivor versus non-survivor comparison tables",
     stagesurv::pipeline::kStepReport},
    {"run", "The full pipeline", stagesurv::pipeline::kStepAll},
};

RunConfig ResolveConfig(const Flags& flags) {
  RunConfig config;
  if (!flags.config.empty()) {
    config = RunConfig::Load(flags.config, flags.seed);
  } else if (flags.seed) {
    config = RunConfig::Defaults(*flags.seed);
  } else {
    throw stagesurv::ConfigError("a seed is mandatory (--seed or --config)");
  }
  if (!flags.out.empty()) config.out = flags.out;
  if (!flags.stage.empty()) {
    config.stages = stagesurv::pipeline::ParseStageSelection(flags.stage);
  }
  if (!flags.learner.empty()) {
    config.learners = stagesurv::pipeline::ParseLearnerSelection(flags.learner);
  }
  return config;
}

void PrintSummary(const RunResult& result) {
  for (const auto& stage : result.stages) {
    fmt::print("{}: {} ({} rows, {} survived){}\n",
               stagesurv::cohort::StageSlug(stage.stage),
               stagesurv::pipeline::StageStatusName(stage.status), stage.rows,
               stage.survivors,
               stage.message.empty() ? "" : ": " + stage.message);
  }
  fmt::print("{} files written to {}\n", result.hashes.size() + 1,
             result.out.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stage-specific cancer survival prediction and explanation"};
  app.require_subcommand(1);
  Flags flags;
  for (const Command& command : kCommands) {
    CLI::App* sub = app.add_subcommand(command.name, command.description);
    sub->add_option("--config", flags.config, "Run configuration (JSON)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "Root seed; overrides the config");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--stage", flags.stage,
                    "localized, regional, distant or all");
    sub->add_option("--learner", flags.learner, "lr, rf, ada, gbdt or all");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const Command* chosen = nullptr;
  for (const Command& command : kCommands) {
    if (app.got_subcommand(command.name)) chosen = &command;
  }
  try {
    const RunConfig config = ResolveConfig(flags);
    const RunResult result =
        chosen->steps == 0
            ? stagesurv::pipeline::WriteSynthCohort(config)
            : stagesurv::pipeline::RunPipeline(config, chosen->steps,
                                               chosen->name);
    PrintSummary(result);
    return result.partial() ? kExitPartial : 0;
  } catch (const stagesurv::ConfigError& e) {
    fmt::print(stderr, "stagesurv: configuration error: {}\n", e.what());
    return kExitConfig;
  } catch (const stagesurv::Error& e) {
    fmt::print(stderr, "stagesurv: data error: {}\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    fmt::print(stderr, "stagesurv: internal error: {}\n", e.what());
    return 1;
  }
}
