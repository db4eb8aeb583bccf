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

#ifndef QRBENCH_BACKEND_HPP_
#define QRBENCH_BACKEND_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qrbench/corpus.hpp"
#include "qrbench/noise.hpp"

namespace qrbench {

/// Weight precision a model is loaded at. NF4 options follow the reference
/// configuration: double quantization on, float32 compute dtype.
struct PrecisionMode {
  enum class Kind { kFull, kInt8, kNf4 };

  Kind kind = Kind::kFull;
  bool nf4_double_quant = true;  // meaningful only when kind == kNf4

  /// "full" | "int8" | "nf4" | "nf4-no-double-quant"
  std::string label() const;
  static PrecisionMode parse(std::string_view name);

  bool operator==(const PrecisionMode&) const = default;
};

struct Decoding {
  enum class Mode { kGreedy, kSampled };
  Mode mode = Mode::kGreedy;
  double temperature = 0.8;   // sampled only
  double top_p = 0.95;        // sampled only
  std::uint64_t seed = 0;     // sampled only
};

struct GenerationRequest {
  std::string prompt;
  int n_samples = 1;
  int max_new_tokens = 512;
  Decoding decoding;
};

/// Opaque per-load model state owned by the backend that produced it.
class ModelState {
 public:
  virtual ~ModelState() = default;
};

struct ModelInfo {
  std::string model_ref;
  PrecisionMode mode;
};

class ModelHandle {
 public:
  ModelHandle() = default;
  ModelHandle(ModelInfo info, std::shared_ptr<ModelState> state)
      : info_(std::move(info)), state_(std::move(state)) {}

  const ModelInfo& info() const { return info_; }
  const std::shared_ptr<ModelState>& state() const { return state_; }
  bool valid() const { return state_ != nullptr; }

 private:
  ModelInfo info_;
  std::shared_ptr<ModelState> state_;
};

/// Uniform interface over model runtimes. load() must behave
/// idempotently for identical arguments, and must fail with BackendError if
/// the tokenizer probe of a quantized load disagrees with the full-precision
/// tokenization of the same model_ref (tokenization must not depend on
/// precision). generate() never mutates weights.
class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;

  virtual ModelHandle load(const std::string& model_ref,
                           const PrecisionMode& mode) = 0;
  virtual std::vector<std::string> generate(const ModelHandle& handle,
                                            const GenerationRequest& request) = 0;
  virtual ParameterList parameters(const ModelHandle& handle) = 0;
  virtual std::vector<std::int64_t> tokenize(const ModelHandle& handle,
                                             std::string_view text) = 0;
};

/// The string every backend tokenizes at load time to verify that
/// quantization did not change tokenizer behavior.
inline constexpr std::string_view kTokenizerProbeText =
    "def probe(x):\n    return x + 1  # tokenizer consistency probe";

/// Cuts a raw completion at the first stop pattern, per dataset convention:
/// both formats stop at end-of-text markers and markdown fences; humaneval
/// completions (function bodies) additionally stop at the first column-0
/// code line (a new top-level definition or statement); mbpp completions
/// (whole functions) stop at the first column-0 assert/print/docstring
/// after the leading definition.
std::string truncate_completion(std::string_view completion,
                                CorpusFormat format);

}  // namespace qrbench

#endif  // QRBENCH_BACKEND_HPP_
