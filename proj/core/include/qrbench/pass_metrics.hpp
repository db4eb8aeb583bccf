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

#ifndef QRBENCH_PASS_METRICS_HPP_
#define QRBENCH_PASS_METRICS_HPP_

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrbench/corpus.hpp"
#include "qrbench/sandbox.hpp"

namespace qrbench {

/// Unbiased pass@k estimator: 1 - C(n-c, k)/C(n, k), evaluated in product
/// form for numerical stability; exactly 1 when n - c < k.
/// Throws DomainError unless 0 <= c <= n and 1 <= k <= n.
double pass_at_k(int n, int c, int k);

struct ProblemOutcome {
  std::string task_id;
  int n = 0;  // samples evaluated
  int c = 0;  // samples passing
  std::vector<Verdict> verdicts;  // one per sample, in sample order
};

struct PassReport {
  std::string dataset_id;
  std::string condition_label;  // "clean", attack label or noise label
  std::string model_ref;
  std::string precision_label;
  std::vector<ProblemOutcome> problems;  // corpus order
  std::map<int, double> pass_at;         // k -> mean over problems

  nlohmann::json to_json() const;
  static PassReport from_json(const nlohmann::json& value);
};

struct EvaluateOptions {
  CorpusFormat format = CorpusFormat::kMbpp;
  std::vector<int> k = {1};
  ExecLimits limits;
  SandboxOptions sandbox;
  int workers = 1;
  std::string dataset_id;
  std::string condition_label = "clean";
  std::string model_ref;
  std::string precision_label;
};

/// Runs every (problem, sample) through the sandbox and aggregates pass@k
/// as the mean of per-problem pass_at_k(n, c, k).
///
/// Each problem must have at least max(k) completions (ValidationError).
/// Executions fan out over a bounded worker pool; results are merged by
/// (problem index, sample index), so parallelism never changes the report.
/// Sandbox infrastructure errors propagate; execution verdicts never throw.
PassReport evaluate(
    const std::vector<Problem>& problems,
    const std::map<std::string, std::vector<std::string>>& completions,
    const EvaluateOptions& options);

}  // namespace qrbench

#endif  // QRBENCH_PASS_METRICS_HPP_
