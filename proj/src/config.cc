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


#include "stagesurv/pipeline/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/common/random.h"

namespace stagesurv::pipeline {

namespace fs = std::filesystem;
using cohort::Stage;
using learners::Learner;
using nlohmann::json;

namespace {

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "seed",      "input",   "synth",          "schema", "cancer_type",
      "k_folds",   "grids",   "learners",       "stages", "explain",
      "threshold", "threads", "reuse_prefixes", "out"};
  return keys;
}

const std::set<std::string>& KnownExplainKeys() {
  static const std::set<std::string> keys = {
      "learner",      "background_size", "kernel_samples",
      "summary_instances", "top_k",      "lime_samples",
      "kernel_width_factor", "lime_ridge", "lime_aggregate_cases"};
  return keys;
}

json ReadJsonFile(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read {}", file.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", file.string(), e.what()));
  }
}

uint64_t ParseSeed(const json& value) {
  if (value.is_number_unsigned()) return value.get<uint64_t>();
  if (value.is_number_integer() && value.get<int64_t>() >= 0) {
    return static_cast<uint64_t>(value.get<int64_t>());
  }
  throw ConfigError("seed must be a non-negative integer");
}

fs::path Resolve(const fs::path& base_dir, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

std::string Joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) out += (out.empty() ? "" : ", ") + item;
  return out;
}

template <typename T>
std::vector<T> ParseSelection(const json& value,
                              std::vector<T> (*parse)(std::string_view)) {
  if (value.is_string()) return parse(value.get<std::string>());
  if (!value.is_array() || value.empty()) {
    throw ConfigError("selection must be \"all\" or a non-empty list");
  }
  std::vector<T> out;
  for (const auto& item : value) {
    for (const T t : parse(item.get<std::string>())) {
      if (std::find(out.begin(), out.end(), t) != out.end()) {
        throw ConfigError(
            fmt::format("'{}' selected twice", item.get<std::string>()));
      }
      out.push_back(t);
    }
  }
  return out;
}

std::vector<Learner> AllLearners() {
  return {learners::kAllLearners.begin(), learners::kAllLearners.end()};
}

std::vector<Stage> AllStages() {
  return {cohort::kAllStages.begin(), cohort::kAllStages.end()};
}

ExplainSettings ParseExplain(const json& value) {
  ExplainSettings s;
  if (!value.is_object()) throw ConfigError("explain must be an object");
  for (const auto& [key, unused] : value.items()) {
    if (!KnownExplainKeys().contains(key)) {
      throw ConfigError(fmt::format("unknown explain setting '{}'", key));
    }
  }
  if (value.contains("learner")) {
    const auto tag = value.at("learner").get<std::string>();
    const auto learner = learners::ParseLearnerTag(tag);
    if (!learner) throw ConfigError(fmt::format("unknown learner '{}'", tag));
    s.learner = *learner;
  }
  s.background_size = value.value("background_size", s.background_size);
  s.kernel_samples = value.value("kernel_samples", s.kernel_samples);
  s.summary_instances = value.value("summary_instances", s.summary_instances);
  s.top_k = value.value("top_k", s.top_k);
  s.lime_samples = value.value("lime_samples", s.lime_samples);
  s.kernel_width_factor =
      value.value("kernel_width_factor", s.kernel_width_factor);
  s.lime_ridge = value.value("lime_ridge", s.lime_ridge);
  s.lime_aggregate_cases =
      value.value("lime_aggregate_cases", s.lime_aggregate_cases);
  if (s.background_size == 0 || s.summary_instances == 0 || s.top_k == 0) {
    throw ConfigError(
        "background_size, summary_instances and top_k must be positive");
  }
  if (s.lime_samples < 10 * s.top_k) {
    throw ConfigError(fmt::format("lime_samples must be at least 10 * top_k = {}",
                                  10 * s.top_k));
  }
  if (!(s.kernel_width_factor > 0.0) || !(s.lime_ridge >= 0.0)) {
    throw ConfigError("kernel_width_factor must be > 0 and lime_ridge >= 0");
  }
  return s;
}

}  // namespace

json ExplainSettings::ToJson() const {
  return {{"learner", learners::LearnerTag(learner)},
          {"background_size", background_size},
          {"kernel_samples", kernel_samples},
          {"summary_instances", summary_instances},
          {"top_k", top_k},
          {"lime_samples", lime_samples},
          {"kernel_width_factor", kernel_width_factor},
          {"lime_ridge", lime_ridge},
          {"lime_aggregate_cases", lime_aggregate_cases}};
}

std::vector<Stage> ParseStageSelection(std::string_view text) {
  if (text == "all") return AllStages();
  if (const auto stage = cohort::ParseStageSlug(text)) return {*stage};
  throw ConfigError(fmt::format(
      "unknown stage '{}' (expected localized, regional, distant or all)", text));
}

std::vector<Learner> ParseLearnerSelection(std::string_view text) {
  if (text == "all") return AllLearners();
  if (const auto learner = learners::ParseLearnerTag(text)) return {*learner};
  throw ConfigError(fmt::format(
      "unknown learner '{}' (expected lr, rf, ada, gbdt or all)", text));
}

RunConfig RunConfig::Defaults(uint64_t seed) {
  RunConfig config;
  config.seed = seed;
  config.schema =
      std::make_shared<const cohort::FeatureSchema>(cohort::FeatureSchema::Default());
  for (const Learner learner : learners::kAllLearners) {
    config.grids.emplace(learner, selection::HyperGrid::Default(learner));
  }
  config.learners = AllLearners();
  config.stages = AllStages();
  return config;
}

RunConfig RunConfig::FromJson(const json& config_json, const fs::path& base_dir,
                              std::optional<uint64_t> seed_override) {
  if (!config_json.is_object()) throw ConfigError("config must be a JSON object");
  std::vector<std::string> unknown;
  for (const auto& [key, unused] : config_json.items()) {
    if (!KnownKeys().contains(key)) unknown.push_back(key);
  }
  if (!unknown.empty()) {
    throw ConfigError(fmt::format("unknown config keys: {}", Joined(unknown)));
  }
  RunConfig config = Defaults(0);
  try {
    if (seed_override) {
      config.seed = *seed_override;
    } else if (config_json.contains("seed")) {
      config.seed = ParseSeed(config_json.at("seed"));
    } else {
      throw ConfigError("a seed is mandatory (config key \"seed\" or --seed)");
    }

    json schema_json;
    if (config_json.contains("schema")) {
      const json& schema = config_json.at("schema");
      schema_json = schema.is_string()
                        ? ReadJsonFile(Resolve(base_dir, schema.get<std::string>()))
                        : schema;
    }
    if (config_json.contains("cancer_type")) {
      const auto cancer = config_json.at("cancer_type").get<std::string>();
      if (schema_json.is_null()) {
        config.schema = std::make_shared<const cohort::FeatureSchema>(
            cohort::FeatureSchema::Default(cancer));
      } else {
        schema_json["cancer_type"] = cancer;
      }
    }
    if (!schema_json.is_null()) {
      config.schema = std::make_shared<const cohort::FeatureSchema>(
          cohort::FeatureSchema::FromJson(schema_json));
    }

    if (config_json.contains("input")) {
      config.input = Resolve(base_dir, config_json.at("input").get<std::string>());
    }
    if (config_json.contains("synth")) {
      if (config.input) throw ConfigError("give either input or synth, not both");
      config.synth = SynthSpec::FromJson(config_json.at("synth"),
                                         DeriveSeed(config.seed, kStreamSynth));
    }
    config.k_folds = config_json.value("k_folds", config.k_folds);
    if (config.k_folds < 2) throw ConfigError("k_folds must be at least 2");
    if (config_json.contains("grids")) {
      for (const auto& [tag, grid] : config_json.at("grids").items()) {
        const auto learner = learners::ParseLearnerTag(tag);
        if (!learner) throw ConfigError(fmt::format("unknown learner '{}'", tag));
        config.grids.insert_or_assign(
            *learner, selection::HyperGrid::FromJson(*learner, grid));
      }
    }
    if (config_json.contains("learners")) {
      config.learners =
          ParseSelection<Learner>(config_json.at("learners"), ParseLearnerSelection);
    }
    if (config_json.contains("stages")) {
      config.stages =
          ParseSelection<Stage>(config_json.at("stages"), ParseStageSelection);
    }
    if (config_json.contains("explain")) {
      config.explain = ParseExplain(config_json.at("explain"));
    }
    config.threshold = config_json.value("threshold", config.threshold);
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
      throw ConfigError("threshold must lie in [0, 1]");
    }
    config.threads = config_json.value("threads", config.threads);
    if (config.threads < 0) throw ConfigError("threads must be >= 0");
    config.reuse_prefixes =
        config_json.value("reuse_prefixes", config.reuse_prefixes);
    if (config_json.contains("out")) {
      config.out = Resolve(base_dir, config_json.at("out").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("invalid config: {}", e.what()));
  }
  return config;
}

RunConfig RunConfig::Load(const fs::path& file,
                          std::optional<uint64_t> seed_override) {
  return FromJson(ReadJsonFile(file), file.parent_path(), seed_override);
}

json RunConfig::ToJson() const {
  json j = {{"seed", seed}};
  if (input) j["input"] = input->generic_string();
  if (synth) j["synth"] = synth->ToJson();
  j["schema"] = schema->ToJson();
  j["k_folds"] = k_folds;
  json grid_json = json::object();
  for (const auto& [learner, grid] : grids) {
    grid_json[std::string(learners::LearnerTag(learner))] = grid.ToJson();
  }
  j["grids"] = std::move(grid_json);
  json learner_json = json::array();
  for (const Learner learner : learners) {
    learner_json.push_back(learners::LearnerTag(learner));
  }
  j["learners"] = std::move(learner_json);
  json stage_json = json::array();
  for (const Stage stage : stages) stage_json.push_back(cohort::StageSlug(stage));
  j["stages"] = std::move(stage_json);
  j["explain"] = explain.ToJson();
  j["threshold"] = threshold;
  j["threads"] = threads;
  j["reuse_prefixes"] = reuse_prefixes;
  j["out"] = out.generic_string();
  return j;
}

selection::StagewiseOptions RunConfig::Stagewise() const {
  selection::StagewiseOptions options;
  options.k = k_folds;
  options.search.seed = seed;
  options.search.threads = threads;
  options.search.threshold = threshold;
  options.search.reuse_prefixes = reuse_prefixes;
  options.grids = grids;
  return options;
}

Learner RunConfig::ExplainLearner() const {
  if (std::find(learners.begin(), learners.end(), explain.learner) !=
      learners.end()) {
    return explain.learner;
  }
  if (learners.empty()) throw ConfigError("no learner selected");
  return learners.front();
}

}  // namespace stagesurv::pipeline
