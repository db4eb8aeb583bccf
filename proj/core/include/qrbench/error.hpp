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

#ifndef QRBENCH_ERROR_HPP_
#define QRBENCH_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrbench {

/// Base class for all qrbench failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input that could not be decoded (bad JSON, bad record line).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input violating the declared schema (missing field, bad type,
/// duplicate id).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's documented domain (k > n, empty tally).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a precondition (wrong attack kind, invalid config).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A text attack could not complete; carries the failing NL span index.
/// No partial output is ever produced alongside this error.
class AttackError : public Error {
 public:
  AttackError(const std::string& message, std::size_t span_index)
      : Error(message), span_index_(span_index) {}

  std::size_t span_index() const { return span_index_; }

 private:
  std::size_t span_index_;
};

/// Weight perturbation failure (non-finite result, snapshot shape mismatch).
class PerturbError : public Error {
 public:
  using Error::Error;
};

/// Model loading or generation failure in a backend adapter.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// Sandbox infrastructure failure (cannot spawn, cannot create workdir).
/// Distinct from any execution verdict: a hostile or broken completion is
/// reported through ExecutionResult, never through this exception.
class SandboxError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrbench

#endif  // QRBENCH_ERROR_HPP_
