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

#include "qrbench/pass_metrics.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "qrbench/error.hpp"

namespace qrbench {

double pass_at_k(int n, int c, int k) {
  if (n < 0 || c < 0 || c > n) {
    throw DomainError("pass_at_k: need 0 <= c <= n");
  }
  if (k < 1 || k > n) {
    throw DomainError("pass_at_k: need 1 <= k <= n");
  }
  if (n - c < k) {
    return 1.0;
  }
  // 1 - C(n-c,k)/C(n,k) = 1 - prod_{i=n-c+1..n} (1 - k/i)
  double failure = 1.0;
  for (int i = n - c + 1; i <= n; ++i) {
    failure *= 1.0 - static_cast<double>(k) / static_cast<double>(i);
  }
  return 1.0 - failure;
}

nlohmann::json PassReport::to_json() const {
  nlohmann::json problems_json = nlohmann::json::array();
  for (const ProblemOutcome& outcome : problems) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (Verdict v : outcome.verdicts) {
      verdicts.push_back(std::string(verdict_name(v)));
    }
    problems_json.push_back({{"task_id", outcome.task_id},
                             {"n", outcome.n},
                             {"c", outcome.c},
                             {"verdicts", std::move(verdicts)}});
  }
  nlohmann::json pass_json = nlohmann::json::object();
  for (const auto& [k, value] : pass_at) {
    pass_json[std::to_string(k)] = value;
  }
  return {{"dataset_id", dataset_id},
          {"condition", condition_label},
          {"model_ref", model_ref},
          {"precision", precision_label},
          {"problems", std::move(problems_json)},
          {"pass_at", std::move(pass_json)}};
}

PassReport PassReport::from_json(const nlohmann::json& value) {
  PassReport report;
  report.dataset_id = value.at("dataset_id").get<std::string>();
  report.condition_label = value.at("condition").get<std::string>();
  report.model_ref = value.at("model_ref").get<std::string>();
  report.precision_label = value.at("precision").get<std::string>();
  for (const nlohmann::json& entry : value.at("problems")) {
    ProblemOutcome outcome;
    outcome.task_id = entry.at("task_id").get<std::string>();
    outcome.n = entry.at("n").get<int>();
    outcome.c = entry.at("c").get<int>();
    for (const nlohmann::json& v : entry.at("verdicts")) {
      outcome.verdicts.push_back(parse_verdict(v.get<std::string>()));
    }
    report.problems.push_back(std::move(outcome));
  }
  for (const auto& [key, v] : value.at("pass_at").items()) {
    report.pass_at[std::stoi(key)] = v.get<double>();
  }
  return report;
}

PassReport evaluate(
    const std::vector<Problem>& problems,
    const std::map<std::string, std::vector<std::string>>& completions,
    const EvaluateOptions& options) {
  if (options.k.empty()) {
    throw ValidationError("evaluate: need at least one k");
  }
  const int max_k = *std::max_element(options.k.begin(), options.k.end());
  if (max_k < 1) {
    throw ValidationError("evaluate: k values must be >= 1");
  }

  struct Job {
    std::size_t problem_index;
    std::size_t sample_index;
    const std::string* completion;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < problems.size(); ++p) {
    const auto it = completions.find(problems[p].task_id);
    if (it == completions.end() ||
        it->second.size() < static_cast<std::size_t>(max_k)) {
      throw ValidationError("evaluate: task '" + problems[p].task_id +
                            "' needs at least " + std::to_string(max_k) +
                            " completions");
    }
    for (std::size_t s = 0; s < it->second.size(); ++s) {
      jobs.push_back({p, s, &it->second[s]});
    }
  }

  // verdict slots indexed by (problem, sample): merging is deterministic
  // regardless of which worker finishes first.
  std::vector<std::vector<Verdict>> verdicts(problems.size());
  for (std::size_t p = 0; p < problems.size(); ++p) {
    verdicts[p].resize(completions.at(problems[p].task_id).size(),
                       Verdict::kRuntimeError);
  }

  std::atomic<std::size_t> next_job{0};
  std::atomic<bool> failed{false};
  std::string failure_message;
  std::mutex failure_mutex;

  const int worker_count =
      std::max(1, std::min(options.workers, static_cast<int>(jobs.size())));
  auto work = [&]() {
    for (;;) {
      const std::size_t index = next_job.fetch_add(1);
      if (index >= jobs.size() || failed.load()) {
        return;
      }
      const Job& job = jobs[index];
      try {
        const ExecutionResult result =
            run_one(problems[job.problem_index], *job.completion,
                    options.format, options.limits, options.sandbox);
        verdicts[job.problem_index][job.sample_index] = result.verdict;
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failed.exchange(true)) {
          failure_message = e.what();
        }
        return;
      }
    }
  };

  if (worker_count == 1) {
    work();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(worker_count));
    for (int i = 0; i < worker_count; ++i) {
      workers.emplace_back(work);
    }
    for (std::thread& thread : workers) {
      thread.join();
    }
  }
  if (failed.load()) {
    throw SandboxError("evaluate: " + failure_message);
  }

  PassReport report;
  report.dataset_id = options.dataset_id;
  report.condition_label = options.condition_label;
  report.model_ref = options.model_ref;
  report.precision_label = options.precision_label;

  for (std::size_t p = 0; p < problems.size(); ++p) {
    ProblemOutcome outcome;
    outcome.task_id = problems[p].task_id;
    outcome.verdicts = verdicts[p];
    outcome.n = static_cast<int>(outcome.verdicts.size());
    outcome.c = static_cast<int>(
        std::count(outcome.verdicts.begin(), outcome.verdicts.end(),
                   Verdict::kPass));
    report.problems.push_back(std::move(outcome));
  }

  for (int k : options.k) {
    if (k < 1) {
      throw ValidationError("evaluate: k values must be >= 1");
    }
    double sum = 0.0;
    for (const ProblemOutcome& outcome : report.problems) {
      sum += pass_at_k(outcome.n, outcome.c, k);
    }
    report.pass_at[k] =
        report.problems.empty() ? 0.0 : sum / static_cast<double>(
                                                  report.problems.size());
  }
  return report;
}

}  // namespace qrbench
