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

#ifndef QRBENCH_JSONL_HPP_
#define QRBENCH_JSONL_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace qrbench {

/// One decoded record of a line-delimited JSON file, with its 1-based line
/// number retained for error reporting.
struct JsonlRecord {
  std::size_t line;
  nlohmann::json value;
};

/// Reads every non-blank line of `path` as one JSON value.
/// Throws ParseError naming the line on malformed JSON, Error if the file
/// cannot be opened.
std::vector<JsonlRecord> read_jsonl(const std::filesystem::path& path);

/// Writes one compact JSON value per line. Object keys are emitted in sorted
/// order (nlohmann default), so output is byte-deterministic.
void write_jsonl(const std::filesystem::path& path,
                 const std::vector<nlohmann::json>& rows);

/// Reads a whole file into a string. Throws Error if unreadable.
std::string read_file(const std::filesystem::path& path);

/// Writes `data` to `path`, creating parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view data);

}  // namespace qrbench

#endif  // QRBENCH_JSONL_HPP_
