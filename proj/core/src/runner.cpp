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

#include "qrbench/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "qrbench/error.hpp"
#include "qrbench/hash.hpp"
#include "qrbench/jsonl.hpp"

namespace qrbench {

namespace {

struct LoadedDataset {
  std::vector<Problem> problems;
  std::string content_hash;
};

struct PerturbedCorpus {
  std::vector<Problem> problems;
  std::string content_hash;
};

std::vector<nlohmann::json> edit_log_rows(const AttackedCorpus& attacked) {
  std::vector<nlohmann::json> rows;
  rows.reserve(attacked.prompts.size());
  for (std::size_t i = 0; i < attacked.prompts.size(); ++i) {
    const PerturbedPrompt& perturbed = attacked.prompts[i];
    nlohmann::json edits = nlohmann::json::array();
    for (const Edit& edit : perturbed.edits) {
      edits.push_back({{"begin", edit.begin},
                       {"end", edit.end},
                       {"before", edit.before},
                       {"after", edit.after}});
    }
    rows.push_back({{"task_id", attacked.problems[i].task_id},
                    {"kind",
                     std::string(attack_kind_name(perturbed.config.kind))},
                    {"seed", perturbed.config.seed},
                    {"edits", std::move(edits)}});
  }
  return rows;
}

void append_failure(const std::filesystem::path& path,
                    const std::string& record_id,
                    const std::string& coordinate,
                    const std::string& message) {
  std::ofstream out(path, std::ios::app);
  out << nlohmann::json{{"record_id", record_id},
                        {"coordinate", coordinate},
                        {"error", message}}
             .dump()
      << '\n';
}

}  // namespace

Runner::Runner(GenerationBackend& backend, AttackResources resources,
               RunnerOptions options)
    : backend_(backend), resources_(resources), options_(options) {}

std::vector<RunRecord> Runner::run(const ExperimentPlan& plan) {
  plan.validate();
  stats_ = RunStats{};

  const std::filesystem::path records_dir = plan.out_dir / "records";
  const std::filesystem::path corpora_dir = plan.out_dir / "corpora";
  std::filesystem::create_directories(records_dir);
  std::filesystem::create_directories(corpora_dir);
  const std::filesystem::path failures_path = plan.out_dir / "failures.jsonl";

  // Datasets load once; their content hash feeds record ids.
  std::map<std::string, LoadedDataset> datasets;
  for (const DatasetEntry& entry : plan.datasets) {
    LoadedDataset loaded;
    loaded.problems = load_corpus(entry.path, entry.format);
    loaded.content_hash = sha256_hex(read_file(entry.path));
    datasets.emplace(entry.path.string(), std::move(loaded));
  }

  // Perturbed corpora are computed once per (dataset, attack) and persisted
  // next to the records for auditability.
  std::map<std::string, PerturbedCorpus> attacked_cache;
  auto attacked_corpus_for = [&](const DatasetEntry& dataset,
                                 const Condition& condition)
      -> const PerturbedCorpus& {
    const std::string key = dataset.path.string() + "\x1f" + condition.label();
    const auto cached = attacked_cache.find(key);
    if (cached != attacked_cache.end()) {
      return cached->second;
    }
    const LoadedDataset& source = datasets.at(dataset.path.string());
    AttackedCorpus attacked =
        attack_corpus(source.problems, *condition.attack, resources_);
    const std::string stem = dataset.id() + "__" + condition.label();
    const std::filesystem::path corpus_path =
        corpora_dir / (stem + ".jsonl");
    save_corpus(corpus_path, attacked.problems);
    write_jsonl(corpora_dir / (stem + "__edits.jsonl"),
                edit_log_rows(attacked));
    PerturbedCorpus result;
    result.problems = std::move(attacked.problems);
    result.content_hash = sha256_hex(read_file(corpus_path));
    return attacked_cache.emplace(key, std::move(result)).first->second;
  };

  // Model handles and their pristine snapshots, cached per (model,
  // precision) within this run.
  struct HandleState {
    ModelHandle handle;
    ParameterList params;
    WeightSnapshot pristine;
    bool noised = false;
  };
  std::map<std::string, HandleState> handles;
  auto handle_for = [&](const ModelEntry& model, const PrecisionMode& mode)
      -> HandleState& {
    const std::string key = model.ref + "\x1f" + mode.label();
    const auto cached = handles.find(key);
    if (cached != handles.end()) {
      return cached->second;
    }
    HandleState state;
    state.handle = backend_.load(model.ref, mode);
    state.params = backend_.parameters(state.handle);
    state.pristine = snapshot(state.params);
    return handles.emplace(key, std::move(state)).first->second;
  };

  std::vector<RunRecord> records;
  const std::vector<Condition> conditions = plan.conditions();
  int coordinate_index = 0;

  for (const ModelEntry& model : plan.models) {
    for (const PrecisionMode& mode : plan.precisions) {
      for (const DatasetEntry& dataset : plan.datasets) {
        for (const Condition& condition : conditions) {
          if (options_.max_coordinates >= 0 &&
              coordinate_index >= options_.max_coordinates) {
            return records;
          }
          ++coordinate_index;
          ++stats_.total;

          const LoadedDataset& source = datasets.at(dataset.path.string());
          const std::string record_id = record_id_for(
              model, mode, condition, dataset, source.content_hash, plan);
          const std::filesystem::path record_path =
              records_dir / (record_id + ".json");
          const std::string coordinate_label =
              model.ref + " / " + mode.label() + " / " + dataset.id() +
              " / " + condition.label();

          if (options_.resume && std::filesystem::exists(record_path)) {
            records.push_back(RunRecord::from_json(
                nlohmann::json::parse(read_file(record_path))));
            ++stats_.resumed;
            continue;
          }

          const auto started = std::chrono::steady_clock::now();
          try {
            const std::vector<Problem>* problems = &source.problems;
            std::string corpus_hash = source.content_hash;
            if (condition.type == Condition::Type::kAttack) {
              const PerturbedCorpus& perturbed =
                  attacked_corpus_for(dataset, condition);
              problems = &perturbed.problems;
              corpus_hash = perturbed.content_hash;
            }

            HandleState& state = handle_for(model, mode);
            if (condition.type == Condition::Type::kNoise) {
              // Every noise coordinate perturbs pristine weights, so sweep
              // order can never leak between levels.
              restore(state.params, state.pristine);
              inject_noise(state.params, *condition.noise);
              state.noised = true;
            } else if (state.noised) {
              restore(state.params, state.pristine);
              state.noised = false;
            }

            GenerationRequest request;
            request.n_samples = plan.effective_n_samples();
            request.max_new_tokens = plan.max_new_tokens;
            request.decoding = plan.decoding;

            std::map<std::string, std::vector<std::string>> completions;
            for (const Problem& problem : *problems) {
              request.prompt = problem.prompt;
              std::vector<std::string> raw =
                  backend_.generate(state.handle, request);
              std::vector<std::string>& cooked = completions[problem.task_id];
              cooked.reserve(raw.size());
              for (const std::string& completion : raw) {
                cooked.push_back(
                    truncate_completion(completion, dataset.format));
              }
            }

            EvaluateOptions eval_options;
            eval_options.format = dataset.format;
            eval_options.k = plan.k;
            eval_options.limits = plan.limits;
            eval_options.sandbox = plan.sandbox;
            eval_options.workers = plan.workers;
            eval_options.dataset_id = dataset.id();
            eval_options.condition_label = condition.label();
            eval_options.model_ref = model.ref;
            eval_options.precision_label = mode.label();

            RunRecord record;
            record.record_id = record_id;
            record.model_ref = model.ref;
            record.size_label = model.size_label;
            record.precision_label = mode.label();
            record.condition_label = condition.label();
            record.condition = condition.to_json();
            record.dataset_id = dataset.id();
            record.dataset_hash = source.content_hash;
            record.corpus_hash = corpus_hash;
            record.report = evaluate(*problems, completions, eval_options);
            record.wall_clock_s =
                std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - started)
                    .count();

            write_file(record_path, record.to_json().dump(2) + "\n");
            records.push_back(std::move(record));
            ++stats_.completed;
          } catch (const std::exception& e) {
            append_failure(failures_path, record_id, coordinate_label,
                           e.what());
            ++stats_.failed;
          }
        }
      }
    }
  }
  return records;
}

std::vector<RunRecord> load_records(const std::filesystem::path& run_dir) {
  const std::filesystem::path records_dir = run_dir / "records";
  std::vector<std::filesystem::path> paths;
  if (std::filesystem::exists(records_dir)) {
    for (const auto& entry :
         std::filesystem::directory_iterator(records_dir)) {
      if (entry.path().extension() == ".json") {
        paths.push_back(entry.path());
      }
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<RunRecord> records;
  records.reserve(paths.size());
  for (const std::filesystem::path& path : paths) {
    records.push_back(
        RunRecord::from_json(nlohmann::json::parse(read_file(path))));
  }
  return records;
}

}  // namespace qrbench
