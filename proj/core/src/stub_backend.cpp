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

#include "qrbench/stub_backend.hpp"

#include <algorithm>
#include <cmath>

#include "qrbench/error.hpp"
#include "qrbench/hash.hpp"
#include "qrbench/jsonl.hpp"
#include "qrbench/rng.hpp"

namespace qrbench {

namespace {

// Synthetic parameter tensors carried by every stub handle. Sized so noise
// statistics are measurable but perturbation sweeps stay instant.
struct SyntheticTensor {
  std::string name;
  std::vector<std::int64_t> shape;
  bool trainable;
};

const std::vector<SyntheticTensor>& synthetic_layout() {
  static const std::vector<SyntheticTensor> kLayout = {
      {"decoder.attention.weight", {64, 32}, true},
      {"decoder.mlp.weight", {128, 16}, true},
      {"decoder.mlp.bias", {128}, true},
      {"rotary.inv_freq", {32}, false},  // buffer, never perturbed
  };
  return kLayout;
}

class StubModelState : public ModelState {
 public:
  StubModelState(const ModelInfo& info, std::uint64_t parameter_seed) {
    for (const SyntheticTensor& tensor : synthetic_layout()) {
      std::int64_t count = 1;
      for (std::int64_t dim : tensor.shape) count *= dim;
      // Pristine values depend only on (seed, name): identical across loads
      // of the same model_ref, so parameter checksums are reproducible.
      Rng rng(derive_seed(parameter_seed, info.model_ref + ":" + tensor.name));
      std::vector<float> values(static_cast<std::size_t>(count));
      for (float& v : values) {
        v = static_cast<float>(rng.next_double() - 0.5);
      }
      names_.push_back(tensor.name);
      shapes_.push_back(tensor.shape);
      trainable_.push_back(tensor.trainable);
      pristine_.push_back(values);
      current_.push_back(std::move(values));
    }
  }

  std::size_t tensor_count() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::int64_t>& shape(std::size_t i) const {
    return shapes_[i];
  }
  bool trainable(std::size_t i) const { return trainable_[i]; }
  std::vector<float>& values(std::size_t i) { return current_[i]; }
  const std::vector<float>& values(std::size_t i) const { return current_[i]; }

  /// Max |current - pristine| over all trainable tensors.
  double max_deviation() const {
    double max_abs = 0.0;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!trainable_[i]) continue;
      for (std::size_t j = 0; j < current_[i].size(); ++j) {
        max_abs = std::max(
            max_abs, std::abs(static_cast<double>(current_[i][j]) -
                              static_cast<double>(pristine_[i][j])));
      }
    }
    return max_abs;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::int64_t>> shapes_;
  std::vector<bool> trainable_;
  std::vector<std::vector<float>> pristine_;
  std::vector<std::vector<float>> current_;
};

class StubParameterView : public ParameterView {
 public:
  StubParameterView(std::shared_ptr<StubModelState> state, std::size_t index)
      : state_(std::move(state)), index_(index) {}

  const std::string& name() const override { return state_->name(index_); }
  std::span<const std::int64_t> shape() const override {
    return state_->shape(index_);
  }
  bool is_trainable() const override { return state_->trainable(index_); }
  std::int64_t size() const override {
    return static_cast<std::int64_t>(state_->values(index_).size());
  }

  void read(std::span<float> out) const override {
    const auto& values = state_->values(index_);
    if (out.size() != values.size()) {
      throw PerturbError("parameter read: size mismatch for '" + name() + "'");
    }
    std::copy(values.begin(), values.end(), out.begin());
  }

  void add_in_place(std::span<const float> delta) override {
    auto& values = state_->values(index_);
    if (delta.size() != values.size()) {
      throw PerturbError("parameter add: size mismatch for '" + name() + "'");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] += delta[i];
    }
  }

  void assign(std::span<const float> new_values) override {
    auto& values = state_->values(index_);
    if (new_values.size() != values.size()) {
      throw PerturbError("parameter assign: size mismatch for '" + name() +
                         "'");
    }
    std::copy(new_values.begin(), new_values.end(), values.begin());
  }

 private:
  std::shared_ptr<StubModelState> state_;
  std::size_t index_;
};

std::string rstrip(std::string_view text) {
  std::size_t end = text.size();
  while (end > 0 && (text[end - 1] == ' ' || text[end - 1] == '\t' ||
                     text[end - 1] == '\r' || text[end - 1] == '\n')) {
    --end;
  }
  return std::string(text.substr(0, end));
}

}  // namespace

StubBackend::StubBackend(std::vector<StubRecord> table, StubOptions options)
    : options_(std::move(options)) {
  for (StubRecord& record : table) {
    table_[{std::move(record.fingerprint), std::move(record.precision)}] =
        std::move(record.completions);
  }
}

StubBackend StubBackend::from_file(const std::filesystem::path& path,
                                   StubOptions options) {
  std::vector<StubRecord> table;
  for (const JsonlRecord& row : read_jsonl(path)) {
    if (!row.value.is_object() || !row.value.contains("fingerprint") ||
        !row.value.contains("completions")) {
      throw SchemaError(path.filename().string() + ":" +
                        std::to_string(row.line) +
                        ": stub record needs fingerprint and completions");
    }
    StubRecord record;
    record.fingerprint = row.value.at("fingerprint").get<std::string>();
    record.completions =
        row.value.at("completions").get<std::vector<std::string>>();
    record.precision = row.value.value("precision", std::string());
    table.push_back(std::move(record));
  }
  return StubBackend(std::move(table), std::move(options));
}

std::string StubBackend::fingerprint(std::string_view prompt) {
  return hex64(fnv1a64(rstrip(prompt)));
}

ModelHandle StubBackend::load(const std::string& model_ref,
                              const PrecisionMode& mode) {
  ModelInfo info{model_ref, mode};
  auto state = std::make_shared<StubModelState>(info, options_.parameter_seed);
  ModelHandle handle(std::move(info), state);

  // Tokenizer consistency probe: every precision of one model_ref must
  // tokenize identically.
  const std::vector<std::int64_t> probe =
      tokenize(handle, kTokenizerProbeText);
  const auto cached = probe_cache_.find(model_ref);
  if (cached == probe_cache_.end()) {
    probe_cache_.emplace(model_ref, probe);
  } else if (cached->second != probe) {
    throw BackendError("load: tokenizer probe for '" + model_ref + "' at " +
                       mode.label() +
                       " differs from a previous load of the same model");
  }
  return handle;
}

const std::vector<std::string>* StubBackend::find(
    const std::string& fingerprint, const std::string& precision) const {
  if (const auto it = table_.find({fingerprint, precision});
      it != table_.end()) {
    return &it->second;
  }
  if (const auto it = table_.find({fingerprint, std::string()});
      it != table_.end()) {
    return &it->second;
  }
  return nullptr;
}

std::vector<std::string> StubBackend::generate(
    const ModelHandle& handle, const GenerationRequest& request) {
  if (!handle.valid()) {
    throw BackendError("generate: invalid model handle");
  }
  if (request.n_samples < 1) {
    throw ValidationError("generate: n_samples must be >= 1");
  }
  ++generate_calls_;
  auto& state = dynamic_cast<StubModelState&>(*handle.state());

  if (state.max_deviation() >= options_.degrade_threshold) {
    return std::vector<std::string>(
        static_cast<std::size_t>(request.n_samples),
        options_.degraded_completion);
  }

  const std::vector<std::string>* completions =
      find(fingerprint(request.prompt), handle.info().mode.label());
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(request.n_samples));
  if (completions == nullptr || completions->empty()) {
    out.assign(static_cast<std::size_t>(request.n_samples),
               options_.fallback_completion);
    return out;
  }
  if (request.decoding.mode == Decoding::Mode::kGreedy) {
    out.assign(static_cast<std::size_t>(request.n_samples),
               completions->front());
  } else {
    Rng rng(request.decoding.seed);
    for (int i = 0; i < request.n_samples; ++i) {
      out.push_back((*completions)[rng.below(completions->size())]);
    }
  }
  return out;
}

ParameterList StubBackend::parameters(const ModelHandle& handle) {
  if (!handle.valid()) {
    throw BackendError("parameters: invalid model handle");
  }
  auto state = std::dynamic_pointer_cast<StubModelState>(handle.state());
  if (!state) {
    throw BackendError("parameters: handle does not belong to the stub");
  }
  ParameterList params;
  for (std::size_t i = 0; i < state->tensor_count(); ++i) {
    params.push_back(std::make_unique<StubParameterView>(state, i));
  }
  return params;
}

std::vector<std::int64_t> StubBackend::tokenize(const ModelHandle& handle,
                                                std::string_view text) {
  if (!handle.valid()) {
    throw BackendError("tokenize: invalid model handle");
  }
  // Byte-level tokenization: trivially precision-independent.
  std::vector<std::int64_t> ids;
  ids.reserve(text.size());
  for (unsigned char c : text) {
    ids.push_back(static_cast<std::int64_t>(c));
  }
  return ids;
}

}  // namespace qrbench
