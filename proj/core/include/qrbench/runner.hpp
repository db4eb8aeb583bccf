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

#ifndef QRBENCH_RUNNER_HPP_
#define QRBENCH_RUNNER_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qrbench/attack.hpp"
#include "qrbench/backend.hpp"
#include "qrbench/plan.hpp"

namespace qrbench {

struct RunStats {
  int total = 0;      // coordinates in the plan
  int completed = 0;  // evaluated in this run
  int resumed = 0;    // skipped, record already on disk
  int failed = 0;     // recorded in failures.jsonl and skipped
};

struct RunnerOptions {
  bool resume = true;
  /// Stop after this many coordinates (testing and smoke-run knob);
  /// negative means unlimited.
  int max_coordinates = -1;
};

/// Executes an experiment plan coordinate by coordinate:
/// load model at precision -> apply condition (prompt attack, weight noise
/// over a pristine snapshot, or clean) -> generate -> evaluate -> persist.
///
/// Layout under plan.out_dir:
///   records/<record_id>.json   one RunRecord per completed coordinate
///   corpora/<dataset>__<condition>.jsonl        perturbed corpora
///   corpora/<dataset>__<condition>__edits.jsonl attack edit logs
///   failures.jsonl             per-coordinate failures (id + message)
///
/// Completed coordinates are skipped on re-run via their content-addressed
/// record ids, so an interrupted run resumes exactly where it stopped.
class Runner {
 public:
  Runner(GenerationBackend& backend, AttackResources resources,
         RunnerOptions options = {});

  /// Runs the plan; per-coordinate failures are recorded, not fatal.
  /// Plan-level validation errors abort before any work.
  std::vector<RunRecord> run(const ExperimentPlan& plan);

  const RunStats& stats() const { return stats_; }

 private:
  GenerationBackend& backend_;
  AttackResources resources_;
  RunnerOptions options_;
  RunStats stats_;
};

/// Loads every record under <run_dir>/records (sorted by file name).
std::vector<RunRecord> load_records(const std::filesystem::path& run_dir);

}  // namespace qrbench

#endif  // QRBENCH_RUNNER_HPP_
