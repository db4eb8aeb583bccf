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

#ifndef QRBENCH_SANDBOX_HPP_
#define QRBENCH_SANDBOX_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "qrbench/corpus.hpp"

namespace qrbench {

enum class Verdict {
  kPass,           // full test suite ran to completion, no assertion failed
  kFail,           // an assertion in the suite failed
  kTimeout,        // wall-clock limit exceeded
  kRuntimeError,   // any other exception, signal or resource-limit kill
  kAssemblyError,  // assembled program does not even compile
};

std::string_view verdict_name(Verdict verdict);
Verdict parse_verdict(std::string_view name);

struct ExecutionResult {
  Verdict verdict = Verdict::kRuntimeError;
  double wall_time_s = 0.0;
  std::string output;  // merged stdout/stderr, truncated to the cap
};

struct ExecLimits {
  double timeout_s = 10.0;
  int memory_mb = 1024;
};

struct SandboxOptions {
  std::string python_exe = "python3";
  std::size_t output_cap_bytes = 16 * 1024;
  /// Parent directory for per-execution private workdirs. Empty selects
  /// $QRBENCH_CACHE_DIR/sandbox, falling back to the system temp dir.
  std::filesystem::path work_root;
  /// Run the child as nobody when the harness is root. Keeps hostile
  /// completions from touching harness-owned files.
  bool drop_privileges = true;
  /// Detach the child into an empty network namespace (best effort; silently
  /// skipped where the kernel refuses).
  bool isolate_network = true;
  /// RLIMIT_NPROC for the child uid; bounds fork storms.
  int nproc_limit = 64;
};

/// Resolves the cache directory: $QRBENCH_CACHE_DIR or the system temp dir.
std::filesystem::path cache_dir();

/// Builds the executable program for one (problem, completion) pair.
///
/// humaneval: prompt + completion + "\n\n" + test + "\n\ncheck(<entry>)\n"
///            (suites define check(candidate); the prompt holds the open
///            function definition the completion continues)
/// mbpp:      completion + "\n\nassert callable(<entry>)\n\n" + test + "\n"
///            (completions are whole functions; suites are plain asserts)
std::string assemble_program(const Problem& problem,
                             std::string_view completion, CorpusFormat format);

/// Executes the assembled program in a separate OS process: private temp
/// working directory, minimal environment, wall-clock timeout, address-space
/// cap, CPU backstop, fork bound and (best effort) no network. The parent
/// process is unaffected by anything the child does.
///
/// Throws SandboxError only for infrastructure failures (cannot spawn,
/// python missing); every behavior of the executed program maps to a
/// verdict.
ExecutionResult run_one(const Problem& problem, std::string_view completion,
                        CorpusFormat format, const ExecLimits& limits,
                        const SandboxOptions& options = {});

}  // namespace qrbench

#endif  // QRBENCH_SANDBOX_HPP_
