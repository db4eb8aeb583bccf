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

#ifndef QRBENCH_PLAN_HPP_
#define QRBENCH_PLAN_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrbench/attack.hpp"
#include "qrbench/backend.hpp"
#include "qrbench/noise.hpp"
#include "qrbench/pass_metrics.hpp"

namespace qrbench {

inline constexpr std::string_view kHarnessVersion = "0.1.0";

/// One evaluation condition: the clean baseline, a prompt attack, or a
/// weight-noise spec.
struct Condition {
  enum class Type { kClean, kAttack, kNoise };

  Type type = Type::kClean;
  std::optional<AttackConfig> attack;  // set iff type == kAttack
  std::optional<NoiseSpec> noise;      // set iff type == kNoise

  static Condition clean();
  static Condition for_attack(AttackConfig cfg);
  static Condition for_noise(NoiseSpec spec);

  /// "clean", "attack-<kind>-s<seed>" or "noise-<family>-<level>-s<seed>".
  std::string label() const;
  nlohmann::json to_json() const;
  static Condition from_json(const nlohmann::json& value);
};

nlohmann::json attack_config_to_json(const AttackConfig& cfg);
AttackConfig attack_config_from_json(const nlohmann::json& value);
nlohmann::json noise_spec_to_json(const NoiseSpec& spec);
NoiseSpec noise_spec_from_json(const nlohmann::json& value);

struct ModelEntry {
  std::string ref;
  std::string size_label;
};

struct DatasetEntry {
  std::filesystem::path path;
  CorpusFormat format = CorpusFormat::kMbpp;

  /// Stable identifier: the file stem.
  std::string id() const { return path.stem().string(); }
};

/// A full experiment matrix: models x precisions x conditions x datasets.
/// The clean baseline is always implied (both metrics require it).
struct ExperimentPlan {
  std::vector<ModelEntry> models;
  std::vector<PrecisionMode> precisions = {PrecisionMode{}};
  std::vector<AttackConfig> attacks;
  std::vector<NoiseSpec> noise_specs;
  std::vector<DatasetEntry> datasets;
  std::vector<int> k = {1};
  ExecLimits limits;
  SandboxOptions sandbox;
  int workers = 1;
  int n_samples = 0;  // 0 selects max(k)
  int max_new_tokens = 512;
  Decoding decoding;  // greedy by default
  std::filesystem::path out_dir = "qrbench-run";

  /// Throws ValidationError on an empty model or dataset list, bad k values
  /// or invalid attack configs.
  void validate() const;

  /// Clean first, then attacks, then noise, in plan order.
  std::vector<Condition> conditions() const;

  int effective_n_samples() const;

  /// Reads a plan from its JSON document; relative dataset paths resolve
  /// against `base_dir`.
  static ExperimentPlan from_json(const nlohmann::json& value,
                                  const std::filesystem::path& base_dir);
  nlohmann::json to_json() const;
};

/// One persisted (model, precision, condition, dataset) outcome.
struct RunRecord {
  std::string record_id;
  std::string model_ref;
  std::string size_label;
  std::string precision_label;
  std::string condition_label;
  nlohmann::json condition;  // full condition config
  std::string dataset_id;
  std::string dataset_hash;  // content hash of the source dataset file
  std::string corpus_hash;   // content hash of the corpus actually evaluated
  PassReport report;
  double wall_clock_s = 0.0;
  std::string harness_version{kHarnessVersion};

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& value);
};

/// Content-addressed record id: SHA-256 over the coordinate's full
/// configuration (model, precision, condition config, dataset content hash,
/// sampling and limit settings).
std::string record_id_for(const ModelEntry& model, const PrecisionMode& mode,
                          const Condition& condition,
                          const DatasetEntry& dataset,
                          const std::string& dataset_hash,
                          const ExperimentPlan& plan);

}  // namespace qrbench

#endif  // QRBENCH_PLAN_HPP_
