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

#ifndef QRBENCH_STUB_BACKEND_HPP_
#define QRBENCH_STUB_BACKEND_HPP_

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrbench/backend.hpp"

namespace qrbench {

/// One stub table row. An empty precision matches any precision; rows with
/// an explicit precision label ("full", "int8", "nf4") take priority, which
/// lets desk-scale fixtures give original and quantized loads different
/// behavior.
struct StubRecord {
  std::string fingerprint;
  std::string precision;  // "" = any
  std::vector<std::string> completions;
};

struct StubOptions {
  std::string fallback_completion = "pass";
  /// When the max absolute deviation of the synthetic weights from their
  /// pristine values reaches this threshold, generate() returns
  /// degraded_completion instead of the table entry; models
  /// noise-induced collapse for pipeline tests.
  double degrade_threshold = std::numeric_limits<double>::infinity();
  std::string degraded_completion = "raise RuntimeError('degraded')";
  std::uint64_t parameter_seed = 20260101;
};

/// Deterministic table-driven backend: generation is a lookup keyed on a
/// normalized prompt fingerprint, and every handle carries a small synthetic
/// parameter set so weight perturbation is exercisable end-to-end with no
/// model runtime installed.
class StubBackend : public GenerationBackend {
 public:
  explicit StubBackend(std::vector<StubRecord> table, StubOptions options = {});

  /// Loads a line-delimited JSON table: one object per line with fields
  /// fingerprint, completions (array of strings) and optional precision.
  static StubBackend from_file(const std::filesystem::path& path,
                               StubOptions options = {});

  /// Normalized prompt fingerprint: trailing whitespace stripped, then
  /// FNV-1a 64 rendered as 16 hex chars.
  static std::string fingerprint(std::string_view prompt);

  ModelHandle load(const std::string& model_ref,
                   const PrecisionMode& mode) override;
  std::vector<std::string> generate(const ModelHandle& handle,
                                    const GenerationRequest& request) override;
  ParameterList parameters(const ModelHandle& handle) override;
  std::vector<std::int64_t> tokenize(const ModelHandle& handle,
                                     std::string_view text) override;

  /// Total generate() invocations; lets resume tests assert that completed
  /// coordinates are never re-generated.
  int generate_calls() const { return generate_calls_; }

 private:
  const std::vector<std::string>* find(const std::string& fingerprint,
                                       const std::string& precision) const;

  std::map<std::pair<std::string, std::string>, std::vector<std::string>>
      table_;
  StubOptions options_;
  std::map<std::string, std::vector<std::int64_t>> probe_cache_;
  int generate_calls_ = 0;
};

}  // namespace qrbench

#endif  // QRBENCH_STUB_BACKEND_HPP_
