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

#include "qrbench/worker_backend.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>

#include "qrbench/error.hpp"

namespace qrbench {

namespace {

constexpr char kBase64Chars[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

}  // namespace

std::string base64_encode(std::string_view data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= data.size()) {
    const unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                       (static_cast<unsigned char>(data[i + 1]) << 8) |
                       static_cast<unsigned char>(data[i + 2]);
    out.push_back(kBase64Chars[(v >> 18) & 0x3f]);
    out.push_back(kBase64Chars[(v >> 12) & 0x3f]);
    out.push_back(kBase64Chars[(v >> 6) & 0x3f]);
    out.push_back(kBase64Chars[v & 0x3f]);
    i += 3;
  }
  const std::size_t rest = data.size() - i;
  if (rest == 1) {
    const unsigned v = static_cast<unsigned char>(data[i]) << 16;
    out.push_back(kBase64Chars[(v >> 18) & 0x3f]);
    out.push_back(kBase64Chars[(v >> 12) & 0x3f]);
    out.append("==");
  } else if (rest == 2) {
    const unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                       (static_cast<unsigned char>(data[i + 1]) << 8);
    out.push_back(kBase64Chars[(v >> 18) & 0x3f]);
    out.push_back(kBase64Chars[(v >> 12) & 0x3f]);
    out.push_back(kBase64Chars[(v >> 6) & 0x3f]);
    out.push_back('=');
  }
  return out;
}

std::string base64_decode(std::string_view data) {
  if (data.size() % 4 != 0) {
    throw ParseError("base64: length not a multiple of 4");
  }
  static const auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::string out;
  out.reserve(data.size() / 4 * 3);
  for (std::size_t i = 0; i < data.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = data[i + j];
      if (c == '=' && i + 4 == data.size() && j >= 2) {
        vals[j] = 0;
        ++pad;
      } else {
        vals[j] = value_of(c);
        if (vals[j] < 0 || pad > 0) {
          throw ParseError("base64: invalid character");
        }
      }
    }
    const unsigned v = (static_cast<unsigned>(vals[0]) << 18) |
                       (static_cast<unsigned>(vals[1]) << 12) |
                       (static_cast<unsigned>(vals[2]) << 6) |
                       static_cast<unsigned>(vals[3]);
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<char>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

/// Child process with line-oriented stdin/stdout pipes.
class WorkerBackend::Process {
 public:
  explicit Process(const std::string& command) {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
      throw BackendError("worker: cannot create pipes");
    }
    pid_ = fork();
    if (pid_ < 0) {
      throw BackendError("worker: fork failed");
    }
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
  }

  ~Process() {
    if (in_fd_ >= 0) close(in_fd_);
    if (out_fd_ >= 0) close(out_fd_);
    if (pid_ > 0) {
      int status = 0;
      if (waitpid(pid_, &status, WNOHANG) == 0) {
        kill(pid_, SIGTERM);
        waitpid(pid_, &status, 0);
      }
    }
  }

  void write_line(const std::string& line) {
    std::string framed = line;
    framed.push_back('\n');
    std::size_t written = 0;
    while (written < framed.size()) {
      const ssize_t n =
          ::write(in_fd_, framed.data() + written, framed.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw BackendError("worker: write failed (worker exited?)");
      }
      written += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    std::string line;
    for (;;) {
      const std::size_t newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      char chunk[4096];
      const ssize_t n = ::read(out_fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw BackendError("worker: read failed");
      }
      if (n == 0) {
        throw BackendError("worker: closed its output stream");
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
};

namespace {

class WorkerModelState : public ModelState {
 public:
  explicit WorkerModelState(std::string handle_id)
      : handle_id_(std::move(handle_id)) {}
  const std::string& handle_id() const { return handle_id_; }

 private:
  std::string handle_id_;
};

std::string handle_id_of(const ModelHandle& handle) {
  const auto state =
      std::dynamic_pointer_cast<WorkerModelState>(handle.state());
  if (!state) {
    throw BackendError("worker: handle does not belong to this backend");
  }
  return state->handle_id();
}

}  // namespace

/// Remote parameter proxy; read/add/assign stream float32 buffers base64
/// encoded over the worker pipe.
class WorkerParameterView : public ParameterView {
 public:
  WorkerParameterView(WorkerBackend* backend, std::string handle_id,
                      std::string name, std::vector<std::int64_t> shape,
                      bool trainable)
      : backend_(backend),
        handle_id_(std::move(handle_id)),
        name_(std::move(name)),
        shape_(std::move(shape)),
        trainable_(trainable) {
    size_ = 1;
    for (std::int64_t dim : shape_) size_ *= dim;
  }

  const std::string& name() const override { return name_; }
  std::span<const std::int64_t> shape() const override { return shape_; }
  bool is_trainable() const override { return trainable_; }
  std::int64_t size() const override { return size_; }

  void read(std::span<float> out) const override {
    const nlohmann::json reply = backend_->call(
        {{"op", "params_read"}, {"handle", handle_id_}, {"name", name_}});
    const std::string bytes =
        base64_decode(reply.at("data_b64").get<std::string>());
    if (bytes.size() != out.size() * sizeof(float)) {
      throw BackendError("worker: parameter '" + name_ +
                         "' returned wrong byte count");
    }
    std::memcpy(out.data(), bytes.data(), bytes.size());
  }

  void add_in_place(std::span<const float> delta) override {
    send_buffer("params_add", delta);
  }

  void assign(std::span<const float> values) override {
    send_buffer("params_assign", values);
  }

 private:
  void send_buffer(const char* op, std::span<const float> values) {
    const std::string_view bytes(
        reinterpret_cast<const char*>(values.data()),
        values.size() * sizeof(float));
    backend_->call({{"op", op},
                    {"handle", handle_id_},
                    {"name", name_},
                    {"data_b64", base64_encode(bytes)}});
  }

  WorkerBackend* backend_;
  std::string handle_id_;
  std::string name_;
  std::vector<std::int64_t> shape_;
  bool trainable_;
  std::int64_t size_;
};

WorkerBackend::WorkerBackend(std::string command)
    : process_(std::make_unique<Process>(std::move(command))) {}

WorkerBackend::~WorkerBackend() {
  try {
    process_->write_line(nlohmann::json{{"op", "shutdown"}}.dump());
  } catch (...) {
    // worker already gone; the Process destructor reaps it
  }
}

nlohmann::json WorkerBackend::call(nlohmann::json request) {
  process_->write_line(request.dump());
  const std::string line = process_->read_line();
  nlohmann::json reply = nlohmann::json::parse(line, nullptr, false);
  if (reply.is_discarded()) {
    throw BackendError("worker: reply is not valid JSON: " + line);
  }
  if (!reply.value("ok", false)) {
    throw BackendError("worker: " +
                       reply.value("error", std::string("unknown error")));
  }
  return reply;
}

ModelHandle WorkerBackend::load(const std::string& model_ref,
                                const PrecisionMode& mode) {
  nlohmann::json precision{{"kind", mode.label()}};
  if (mode.kind == PrecisionMode::Kind::kNf4) {
    precision["kind"] = "nf4";
    precision["double_quant"] = mode.nf4_double_quant;
  }
  const nlohmann::json reply = call({{"op", "load"},
                                     {"model_ref", model_ref},
                                     {"precision", precision}});
  ModelHandle handle(
      ModelInfo{model_ref, mode},
      std::make_shared<WorkerModelState>(
          reply.at("handle").get<std::string>()));

  // Tokenizer consistency: all precisions of one model_ref must agree on
  // the probe (the worker reports probe ids in its load reply).
  std::vector<std::int64_t> probe;
  if (reply.contains("probe")) {
    probe = reply.at("probe").get<std::vector<std::int64_t>>();
  } else {
    probe = tokenize(handle, kTokenizerProbeText);
  }
  const auto cached = probe_cache_.find(model_ref);
  if (cached == probe_cache_.end()) {
    probe_cache_.emplace(model_ref, std::move(probe));
  } else if (cached->second != probe) {
    throw BackendError("load: tokenizer probe for '" + model_ref + "' at " +
                       mode.label() +
                       " differs from a previous load of the same model");
  }
  return handle;
}

std::vector<std::string> WorkerBackend::generate(
    const ModelHandle& handle, const GenerationRequest& request) {
  if (request.n_samples < 1) {
    throw ValidationError("generate: n_samples must be >= 1");
  }
  nlohmann::json decoding{
      {"mode",
       request.decoding.mode == Decoding::Mode::kGreedy ? "greedy"
                                                        : "sampled"},
      {"temperature", request.decoding.temperature},
      {"top_p", request.decoding.top_p},
      {"seed", request.decoding.seed}};
  const nlohmann::json reply = call({{"op", "generate"},
                                     {"handle", handle_id_of(handle)},
                                     {"prompt", request.prompt},
                                     {"n_samples", request.n_samples},
                                     {"max_new_tokens",
                                      request.max_new_tokens},
                                     {"decoding", decoding}});
  auto completions =
      reply.at("completions").get<std::vector<std::string>>();
  if (completions.size() != static_cast<std::size_t>(request.n_samples)) {
    throw BackendError("worker: expected " +
                       std::to_string(request.n_samples) +
                       " completions, got " +
                       std::to_string(completions.size()));
  }
  return completions;
}

ParameterList WorkerBackend::parameters(const ModelHandle& handle) {
  const std::string handle_id = handle_id_of(handle);
  const nlohmann::json reply =
      call({{"op", "params_list"}, {"handle", handle_id}});
  ParameterList params;
  for (const nlohmann::json& entry : reply.at("params")) {
    params.push_back(std::make_unique<WorkerParameterView>(
        this, handle_id, entry.at("name").get<std::string>(),
        entry.at("shape").get<std::vector<std::int64_t>>(),
        entry.value("trainable", true)));
  }
  return params;
}

std::vector<std::int64_t> WorkerBackend::tokenize(const ModelHandle& handle,
                                                  std::string_view text) {
  const nlohmann::json reply = call({{"op", "tokenize"},
                                     {"handle", handle_id_of(handle)},
                                     {"text", std::string(text)}});
  return reply.at("ids").get<std::vector<std::int64_t>>();
}

}  // namespace qrbench
