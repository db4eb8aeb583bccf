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

#include "qrbench/backend.hpp"

#include <array>

#include "qrbench/error.hpp"

namespace qrbench {

std::string PrecisionMode::label() const {
  switch (kind) {
    case Kind::kFull:
      return "full";
    case Kind::kInt8:
      return "int8";
    case Kind::kNf4:
      return nf4_double_quant ? "nf4" : "nf4-no-double-quant";
  }
  return "unknown";
}

PrecisionMode PrecisionMode::parse(std::string_view name) {
  PrecisionMode mode;
  if (name == "full") {
    mode.kind = Kind::kFull;
  } else if (name == "int8") {
    mode.kind = Kind::kInt8;
  } else if (name == "nf4") {
    mode.kind = Kind::kNf4;
  } else if (name == "nf4-no-double-quant") {
    mode.kind = Kind::kNf4;
    mode.nf4_double_quant = false;
  } else {
    throw ValidationError("unknown precision: '" + std::string(name) +
                          "' (expected full, int8 or nf4)");
  }
  return mode;
}

namespace {

bool line_starts_with_any(std::string_view line,
                          std::initializer_list<std::string_view> prefixes) {
  for (std::string_view prefix : prefixes) {
    if (line.starts_with(prefix)) return true;
  }
  return false;
}

}  // namespace

std::string truncate_completion(std::string_view completion,
                                CorpusFormat format) {
  std::size_t cut = completion.size();
  for (std::string_view marker :
       {std::string_view("<|endoftext|>"), std::string_view("<|eot_id|>"),
        std::string_view("```")}) {
    const std::size_t pos = completion.find(marker);
    if (pos != std::string_view::npos) cut = std::min(cut, pos);
  }

  // Column-0 stop lines. The first line of an mbpp completion is itself a
  // top-level definition, so scanning starts after it; humaneval
  // completions continue an open definition, so any top-level code ends
  // them.
  std::size_t line_start = 0;
  bool first_line = true;
  while (line_start < cut) {
    std::size_t line_end = completion.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = completion.size();
    const std::string_view line =
        completion.substr(line_start, line_end - line_start);
    if (!first_line || format == CorpusFormat::kHumanEval) {
      const bool stop =
          format == CorpusFormat::kHumanEval
              ? line_starts_with_any(line, {"def ", "class ", "if ", "print(",
                                            "@", "#", "assert "})
              : line_starts_with_any(line, {"assert ", "print(", "\"\"\""});
      if (stop && line_start < cut) {
        cut = std::min(cut, line_start);
        break;
      }
    }
    first_line = false;
    line_start = line_end + 1;
  }

  return std::string(completion.substr(0, cut));
}

}  // namespace qrbench
