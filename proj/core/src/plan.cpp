//
// Copyright 2026 The qrbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "qrbench/plan.hpp"

#include <algorithm>

#include "qrbench/error.hpp"
#include "qrbench/hash.hpp"

namespace qrbench {

Condition Condition::clean() { return Condition{}; }

Condition Condition::for_attack(AttackConfig cfg) {
  Condition condition;
  condition.type = Type::kAttack;
  condition.attack = std::move(cfg);
  return condition;
}

Condition Condition::for_noise(NoiseSpec spec) {
  Condition condition;
  condition.type = Type::kNoise;
  condition.noise = spec;
  return condition;
}

std::string Condition::label() const {
  switch (type) {
    case Type::kClean:
      return "clean";
    case Type::kAttack:
      return "attack-" + std::string(attack_kind_name(attack->kind)) + "-s" +
             std::to_string(attack->seed);
    case Type::kNoise:
      return noise->label();
  }
  return "unknown";
}

nlohmann::json attack_config_to_json(const AttackConfig& cfg) {
  return {{"kind", std::string(attack_kind_name(cfg.kind))},
          {"seed", cfg.seed},
          {"char_change_prob", cfg.char_change_prob},
          {"char_max_changes", cfg.char_max_changes},
          {"word_replace_prob", cfg.word_replace_prob},
          {"word_max_synonyms", cfg.word_max_synonyms},
          {"pivot_src", cfg.pivot_src},
          {"pivot_tgt", cfg.pivot_tgt}};
}

AttackConfig attack_config_from_json(const nlohmann::json& value) {
  AttackConfig cfg;
  cfg.kind = parse_attack_kind(value.at("kind").get<std::string>());
  cfg.seed = value.value("seed", std::uint64_t{0});
  cfg.char_change_prob = value.value("char_change_prob", cfg.char_change_prob);
  cfg.char_max_changes = value.value("char_max_changes", cfg.char_max_changes);
  cfg.word_replace_prob =
      value.value("word_replace_prob", cfg.word_replace_prob);
  cfg.word_max_synonyms =
      value.value("word_max_synonyms", cfg.word_max_synonyms);
  cfg.pivot_src = value.value("pivot_src", cfg.pivot_src);
  cfg.pivot_tgt = value.value("pivot_tgt", cfg.pivot_tgt);
  cfg.validate();
  return cfg;
}

nlohmann::json noise_spec_to_json(const NoiseSpec& spec) {
  return {{"family", std::string(noise_family_name(spec.family))},
          {"level", spec.level},
          {"seed", spec.seed}};
}

NoiseSpec noise_spec_from_json(const nlohmann::json& value) {
  NoiseSpec spec;
  spec.family = parse_noise_family(value.at("family").get<std::string>());
  spec.level = value.at("level").get<double>();
  spec.seed = value.value("seed", std::uint64_t{0});
  if (spec.level < 0.0) {
    throw ValidationError("noise level must be >= 0");
  }
  return spec;
}

nlohmann::json Condition::to_json() const {
  switch (type) {
    case Type::kClean:
      return {{"type", "clean"}};
    case Type::kAttack:
      return {{"type", "attack"}, {"attack", attack_config_to_json(*attack)}};
    case Type::kNoise:
      return {{"type", "noise"}, {"noise", noise_spec_to_json(*noise)}};
  }
  return {};
}

Condition Condition::from_json(const nlohmann::json& value) {
  const std::string type = value.at("type").get<std::string>();
  if (type == "clean") return clean();
  if (type == "attack") {
    return for_attack(attack_config_from_json(value.at("attack")));
  }
  if (type == "noise") {
    return for_noise(noise_spec_from_json(value.at("noise")));
  }
  throw SchemaError("unknown condition type: '" + type + "'");
}

void ExperimentPlan::validate() const {
  if (models.empty()) {
    throw ValidationError("plan: model list is empty");
  }
  if (datasets.empty()) {
    throw ValidationError("plan: dataset list is empty");
  }
  if (precisions.empty()) {
    throw ValidationError("plan: precision list is empty");
  }
  if (k.empty() || *std::min_element(k.begin(), k.end()) < 1) {
    throw ValidationError("plan: k values must be >= 1");
  }
  if (limits.timeout_s <= 0.0 || limits.memory_mb <= 0) {
    throw ValidationError("plan: limits must be positive");
  }
  if (workers < 1) {
    throw ValidationError("plan: workers must be >= 1");
  }
  for (const AttackConfig& cfg : attacks) {
    cfg.validate();
  }
  for (const NoiseSpec& spec : noise_specs) {
    if (spec.level < 0.0) {
      throw ValidationError("plan: noise level must be >= 0");
    }
  }
  if (n_samples < 0) {
    throw ValidationError("plan: n_samples must be >= 0");
  }
  const int needed = *std::max_element(k.begin(), k.end());
  if (n_samples > 0 && n_samples < needed) {
    throw ValidationError("plan: n_samples must cover max(k)");
  }
}

std::vector<Condition> ExperimentPlan::conditions() const {
  std::vector<Condition> out;
  out.push_back(Condition::clean());
  for (const AttackConfig& cfg : attacks) {
    out.push_back(Condition::for_attack(cfg));
  }
  for (const NoiseSpec& spec : noise_specs) {
    out.push_back(Condition::for_noise(spec));
  }
  return out;
}

int ExperimentPlan::effective_n_samples() const {
  if (n_samples > 0) return n_samples;
  return *std::max_element(k.begin(), k.end());
}

ExperimentPlan ExperimentPlan::from_json(
    const nlohmann::json& value, const std::filesystem::path& base_dir) {
  ExperimentPlan plan;
  plan.models.clear();
  for (const nlohmann::json& entry : value.value("models",
                                                 nlohmann::json::array())) {
    plan.models.push_back({entry.at("ref").get<std::string>(),
                           entry.value("size", std::string())});
  }
  if (value.contains("precisions")) {
    plan.precisions.clear();
    for (const nlohmann::json& entry : value.at("precisions")) {
      plan.precisions.push_back(
          PrecisionMode::parse(entry.get<std::string>()));
    }
  }
  for (const nlohmann::json& entry : value.value("attacks",
                                                 nlohmann::json::array())) {
    plan.attacks.push_back(attack_config_from_json(entry));
  }
  for (const nlohmann::json& entry : value.value("noise",
                                                 nlohmann::json::array())) {
    plan.noise_specs.push_back(noise_spec_from_json(entry));
  }
  for (const nlohmann::json& entry : value.value("datasets",
                                                 nlohmann::json::array())) {
    DatasetEntry dataset;
    std::filesystem::path path = entry.at("path").get<std::string>();
    dataset.path = path.is_absolute() ? path : base_dir / path;
    dataset.format =
        parse_corpus_format(entry.value("format", std::string("mbpp")));
    plan.datasets.push_back(std::move(dataset));
  }
  if (value.contains("k")) {
    plan.k = value.at("k").get<std::vector<int>>();
  }
  if (value.contains("limits")) {
    plan.limits.timeout_s =
        value.at("limits").value("timeout_s", plan.limits.timeout_s);
    plan.limits.memory_mb =
        value.at("limits").value("memory_mb", plan.limits.memory_mb);
  }
  plan.workers = value.value("workers", plan.workers);
  plan.n_samples = value.value("n_samples", plan.n_samples);
  plan.max_new_tokens = value.value("max_new_tokens", plan.max_new_tokens);
  if (value.contains("decoding")) {
    const nlohmann::json& decoding = value.at("decoding");
    const std::string mode = decoding.value("mode", std::string("greedy"));
    if (mode == "greedy") {
      plan.decoding.mode = Decoding::Mode::kGreedy;
    } else if (mode == "sampled") {
      plan.decoding.mode = Decoding::Mode::kSampled;
    } else {
      throw ValidationError("plan: unknown decoding mode '" + mode + "'");
    }
    plan.decoding.temperature =
        decoding.value("temperature", plan.decoding.temperature);
    plan.decoding.top_p = decoding.value("top_p", plan.decoding.top_p);
    plan.decoding.seed = decoding.value("seed", plan.decoding.seed);
  }
  if (value.contains("out_dir")) {
    std::filesystem::path out = value.at("out_dir").get<std::string>();
    plan.out_dir = out.is_absolute() ? out : base_dir / out;
  }
  return plan;
}

nlohmann::json ExperimentPlan::to_json() const {
  nlohmann::json models_json = nlohmann::json::array();
  for (const ModelEntry& model : models) {
    models_json.push_back({{"ref", model.ref}, {"size", model.size_label}});
  }
  nlohmann::json precisions_json = nlohmann::json::array();
  for (const PrecisionMode& mode : precisions) {
    precisions_json.push_back(mode.label());
  }
  nlohmann::json attacks_json = nlohmann::json::array();
  for (const AttackConfig& cfg : attacks) {
    attacks_json.push_back(attack_config_to_json(cfg));
  }
  nlohmann::json noise_json = nlohmann::json::array();
  for (const NoiseSpec& spec : noise_specs) {
    noise_json.push_back(noise_spec_to_json(spec));
  }
  nlohmann::json datasets_json = nlohmann::json::array();
  for (const DatasetEntry& dataset : datasets) {
    datasets_json.push_back(
        {{"path", dataset.path.string()},
         {"format", std::string(corpus_format_name(dataset.format))}});
  }
  return {{"models", std::move(models_json)},
          {"precisions", std::move(precisions_json)},
          {"attacks", std::move(attacks_json)},
          {"noise", std::move(noise_json)},
          {"datasets", std::move(datasets_json)},
          {"k", k},
          {"limits",
           {{"timeout_s", limits.timeout_s}, {"memory_mb", limits.memory_mb}}},
          {"workers", workers},
          {"n_samples", n_samples},
          {"max_new_tokens", max_new_tokens},
          {"out_dir", out_dir.string()}};
}

nlohmann::json RunRecord::to_json() const {
  return {{"record_id", record_id},
          {"model_ref", model_ref},
          {"size", size_label},
          {"precision", precision_label},
          {"condition_label", condition_label},
          {"condition", condition},
          {"dataset_id", dataset_id},
          {"dataset_hash", dataset_hash},
          {"corpus_hash", corpus_hash},
          {"report", report.to_json()},
          {"wall_clock_s", wall_clock_s},
          {"harness_version", harness_version}};
}

RunRecord RunRecord::from_json(const nlohmann::json& value) {
  RunRecord record;
  record.record_id = value.at("record_id").get<std::string>();
  record.model_ref = value.at("model_ref").get<std::string>();
  record.size_label = value.at("size").get<std::string>();
  record.precision_label = value.at("precision").get<std::string>();
  record.condition_label = value.at("condition_label").get<std::string>();
  record.condition = value.at("condition");
  record.dataset_id = value.at("dataset_id").get<std::string>();
  record.dataset_hash = value.at("dataset_hash").get<std::string>();
  record.corpus_hash = value.at("corpus_hash").get<std::string>();
  record.report = PassReport::from_json(value.at("report"));
  record.wall_clock_s = value.value("wall_clock_s", 0.0);
  record.harness_version =
      value.value("harness_version", std::string(kHarnessVersion));
  return record;
}

std::string record_id_for(const ModelEntry& model, const PrecisionMode& mode,
                          const Condition& condition,
                          const DatasetEntry& dataset,
                          const std::string& dataset_hash,
                          const ExperimentPlan& plan) {
  const nlohmann::json key = {
      {"schema", 1},
      {"model_ref", model.ref},
      {"precision", mode.label()},
      {"condition", condition.to_json()},
      {"dataset_id", dataset.id()},
      {"dataset_hash", dataset_hash},
      {"format", std::string(corpus_format_name(dataset.format))},
      {"k", plan.k},
      {"n_samples", plan.effective_n_samples()},
      {"max_new_tokens", plan.max_new_tokens},
      {"timeout_s", plan.limits.timeout_s},
      {"memory_mb", plan.limits.memory_mb},
  };
  return sha256_hex(key.dump());
}

}  // namespace qrbench
