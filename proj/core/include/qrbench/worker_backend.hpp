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

#ifndef QRBENCH_WORKER_BACKEND_HPP_
#define QRBENCH_WORKER_BACKEND_HPP_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrbench/backend.hpp"

namespace qrbench {

/// Adapter to a real model runtime running in a separate worker process
/// (e.g. a Python process hosting Hugging Face transformers with
/// bitsandbytes quantization; tools/hf_worker.py is a reference worker).
///
/// The worker speaks one JSON object per line on stdin/stdout:
///
///   -> {"op":"load","model_ref":R,"precision":{"kind":"nf4",
///       "double_quant":true}}
///   <- {"ok":true,"handle":H,"probe":[ids...]}
///   -> {"op":"generate","handle":H,"prompt":P,"n_samples":N,
///       "max_new_tokens":M,"decoding":{"mode":"greedy"|"sampled",
///       "temperature":T,"top_p":p,"seed":S}}
///   <- {"ok":true,"completions":[...]}
///   -> {"op":"tokenize","handle":H,"text":T}
///   <- {"ok":true,"ids":[...]}
///   -> {"op":"params_list","handle":H}
///   <- {"ok":true,"params":[{"name":N,"shape":[...],"trainable":B},...]}
///   -> {"op":"params_read","handle":H,"name":N}
///   <- {"ok":true,"data_b64":"..."}            (float32 little-endian)
///   -> {"op":"params_add","handle":H,"name":N,"data_b64":"..."}
///   -> {"op":"params_assign","handle":H,"name":N,"data_b64":"..."}
///   <- {"ok":true}
///   -> {"op":"shutdown"}
///
/// Any {"ok":false,"error":...} reply raises BackendError. Calls on one
/// backend are serialized by the harness; weight perturbation through this
/// adapter streams tensors over the pipe and is intended for small models.
class WorkerBackend : public GenerationBackend {
 public:
  /// Spawns `command` via /bin/sh -c. Throws BackendError if the worker
  /// cannot be started or fails its hello exchange.
  explicit WorkerBackend(std::string command);
  ~WorkerBackend() override;

  WorkerBackend(const WorkerBackend&) = delete;
  WorkerBackend& operator=(const WorkerBackend&) = delete;

  ModelHandle load(const std::string& model_ref,
                   const PrecisionMode& mode) override;
  std::vector<std::string> generate(const ModelHandle& handle,
                                    const GenerationRequest& request) override;
  ParameterList parameters(const ModelHandle& handle) override;
  std::vector<std::int64_t> tokenize(const ModelHandle& handle,
                                     std::string_view text) override;

 private:
  friend class WorkerParameterView;
  class Process;

  nlohmann::json call(nlohmann::json request);

  std::unique_ptr<Process> process_;
  std::map<std::string, std::vector<std::int64_t>> probe_cache_;
};

/// Encodes bytes as RFC 4648 base64 (no line breaks).
std::string base64_encode(std::string_view data);

/// Strict base64 decoding; throws ParseError on invalid input.
std::string base64_decode(std::string_view data);

}  // namespace qrbench

#endif  // QRBENCH_WORKER_BACKEND_HPP_
