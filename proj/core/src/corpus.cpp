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

#include "qrbench/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <unordered_set>

#include <json.hpp>

#include "qrbench/error.hpp"
#include "qrbench/jsonl.hpp"

namespace qrbench {

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "humaneval") return CorpusFormat::kHumanEval;
  if (name == "mbpp") return CorpusFormat::kMbpp;
  throw ValidationError("unknown corpus format: '" + std::string(name) +
                        "' (expected humaneval or mbpp)");
}

std::string_view corpus_format_name(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kHumanEval:
      return "humaneval";
    case CorpusFormat::kMbpp:
      return "mbpp";
  }
  return "unknown";
}

std::vector<Segment> PromptSegmentation::nl_spans() const {
  std::vector<Segment> out;
  for (const Segment& s : segments) {
    if (s.kind == SegmentKind::kNaturalLanguage) out.push_back(s);
  }
  return out;
}

std::vector<Segment> PromptSegmentation::protected_spans() const {
  std::vector<Segment> out;
  for (const Segment& s : segments) {
    if (s.kind == SegmentKind::kProtected) out.push_back(s);
  }
  return out;
}

bool contains_identifier(std::string_view text, std::string_view identifier) {
  if (identifier.empty()) return false;
  auto is_ident = [](unsigned char c) {
    return std::isalnum(c) != 0 || c == '_';
  };
  std::size_t pos = 0;
  while ((pos = text.find(identifier, pos)) != std::string_view::npos) {
    const bool left_ok = pos == 0 || !is_ident(text[pos - 1]);
    const std::size_t after = pos + identifier.size();
    const bool right_ok = after >= text.size() || !is_ident(text[after]);
    if (left_ok && right_ok) return true;
    pos += 1;
  }
  return false;
}

namespace {

std::string json_type_name(const nlohmann::json& value) {
  return std::string(value.type_name());
}

std::string require_string_field(const nlohmann::json& record,
                                 const char* field,
                                 const std::filesystem::path& path,
                                 std::size_t line) {
  const auto it = record.find(field);
  if (it == record.end()) {
    throw SchemaError(path.filename().string() + ":" + std::to_string(line) +
                      ": missing required field '" + field + "'");
  }
  if (!it->is_string()) {
    throw SchemaError(path.filename().string() + ":" + std::to_string(line) +
                      ": field '" + field + "' must be a string, got " +
                      json_type_name(*it));
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<Problem> load_corpus(const std::filesystem::path& path,
                                 [[maybe_unused]] CorpusFormat format) {
  if (!std::filesystem::exists(path)) {
    throw Error("dataset file does not exist: " + path.string());
  }
  const std::vector<JsonlRecord> records = read_jsonl(path);

  std::vector<Problem> problems;
  problems.reserve(records.size());
  std::unordered_set<std::string> seen_ids;
  for (const JsonlRecord& record : records) {
    if (!record.value.is_object()) {
      throw SchemaError(path.filename().string() + ":" +
                        std::to_string(record.line) +
                        ": record must be a JSON object");
    }
    Problem problem;
    problem.task_id =
        require_string_field(record.value, "task_id", path, record.line);
    problem.prompt =
        require_string_field(record.value, "prompt", path, record.line);
    problem.entry_point =
        require_string_field(record.value, "entry_point", path, record.line);
    problem.test_suite =
        require_string_field(record.value, "test", path, record.line);
    if (const auto it = record.value.find("canonical_solution");
        it != record.value.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw SchemaError(path.filename().string() + ":" +
                          std::to_string(record.line) +
                          ": field 'canonical_solution' must be a string");
      }
      problem.canonical_solution = it->get<std::string>();
    }

    if (!seen_ids.insert(problem.task_id).second) {
      throw SchemaError(path.filename().string() + ":" +
                        std::to_string(record.line) + ": duplicate task_id '" +
                        problem.task_id + "'");
    }
    if (problem.prompt.empty()) {
      throw SchemaError(path.filename().string() + ":" +
                        std::to_string(record.line) + ": empty prompt");
    }
    if (problem.test_suite.empty()) {
      throw SchemaError(path.filename().string() + ":" +
                        std::to_string(record.line) + ": empty test suite");
    }
    if (!contains_identifier(problem.prompt, problem.entry_point) &&
        !contains_identifier(problem.test_suite, problem.entry_point)) {
      throw SchemaError(path.filename().string() + ":" +
                        std::to_string(record.line) + ": entry_point '" +
                        problem.entry_point +
                        "' does not occur in prompt or test");
    }
    problems.push_back(std::move(problem));
  }
  return problems;
}

void save_corpus(const std::filesystem::path& path,
                 const std::vector<Problem>& problems) {
  std::vector<nlohmann::json> rows;
  rows.reserve(problems.size());
  for (const Problem& p : problems) {
    nlohmann::json row{
        {"task_id", p.task_id},
        {"prompt", p.prompt},
        {"entry_point", p.entry_point},
        {"test", p.test_suite},
    };
    if (p.canonical_solution) {
      row["canonical_solution"] = *p.canonical_solution;
    }
    rows.push_back(std::move(row));
  }
  write_jsonl(path, rows);
}

namespace {

struct Line {
  std::size_t begin;  // offset of first byte
  std::size_t end;    // offset one past the line's trailing newline (if any)
  std::string_view text;  // excludes the trailing newline
};

std::vector<Line> split_lines(std::string_view prompt) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < prompt.size()) {
    std::size_t nl = prompt.find('\n', pos);
    std::size_t end = (nl == std::string_view::npos) ? prompt.size() : nl + 1;
    std::size_t text_end = (nl == std::string_view::npos) ? prompt.size() : nl;
    lines.push_back({pos, end, prompt.substr(pos, text_end - pos)});
    pos = end;
  }
  return lines;
}

std::string_view left_trimmed(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  return text.substr(i);
}

bool is_blank(std::string_view text) { return left_trimmed(text).empty(); }

// Indentation in columns; a tab advances to the next multiple of 8.
std::size_t indent_columns(std::string_view text) {
  std::size_t col = 0;
  for (char c : text) {
    if (c == ' ') {
      ++col;
    } else if (c == '\t') {
      col = (col / 8 + 1) * 8;
    } else {
      break;
    }
  }
  return col;
}

bool has_protected_prefix(std::string_view trimmed) {
  static constexpr std::array<std::string_view, 6> kPrefixes = {
      "assert", ">>>", "def ", "class ", "import ", "from "};
  for (std::string_view prefix : kPrefixes) {
    if (trimmed.starts_with(prefix)) return true;
  }
  return false;
}

bool is_fence_line(std::string_view trimmed) {
  return trimmed.starts_with("```") || trimmed.starts_with("~~~");
}

// Counts unescaped occurrences of a triple-quote delimiter to track whether
// a line leaves the text inside a docstring.
std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string_view::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

PromptSegmentation segment_prompt(std::string_view prompt) {
  if (prompt.empty()) {
    throw ValidationError("segment_prompt: prompt must be non-empty");
  }
  const std::vector<Line> lines = split_lines(prompt);
  const std::size_t n = lines.size();

  // First pass: fence membership and docstring regions. A docstring region's
  // base indentation is the indentation of its opening line, so that its
  // prose sits at relative indent 0 and only deeper-indented content counts
  // as an embedded code block.
  std::vector<bool> in_fence(n, false);
  std::vector<bool> in_docstring(n, false);  // interior or delimiter lines
  std::vector<std::size_t> region_base(n, 0);

  bool fence_open = false;
  bool triple_open = false;
  std::string_view triple_delim;
  std::size_t docstring_base = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string_view trimmed = left_trimmed(lines[i].text);
    if (!triple_open && is_fence_line(trimmed)) {
      in_fence[i] = true;
      fence_open = !fence_open;
      continue;
    }
    if (fence_open) {
      in_fence[i] = true;
      continue;
    }
    if (!triple_open) {
      // A line may open (and possibly close) a docstring.
      for (std::string_view delim : {std::string_view("\"\"\""),
                                     std::string_view("'''")}) {
        const std::size_t occurrences = count_occurrences(lines[i].text, delim);
        if (occurrences == 0) continue;
        in_docstring[i] = true;
        if (occurrences % 2 == 1) {
          triple_open = true;
          triple_delim = delim;
          docstring_base = indent_columns(lines[i].text);
        }
        break;
      }
      if (in_docstring[i]) {
        region_base[i] = docstring_base;
      }
    } else {
      in_docstring[i] = true;
      region_base[i] = docstring_base;
      if (count_occurrences(lines[i].text, triple_delim) % 2 == 1) {
        triple_open = false;
      }
    }
  }

  // Base indentation of the top-level region: the minimum indentation over
  // its non-blank lines, so uniformly indented prompts are not misread as
  // code blocks.
  std::size_t top_base = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < n; ++i) {
    if (in_fence[i] || in_docstring[i] || is_blank(lines[i].text)) continue;
    top_base = std::min(top_base, indent_columns(lines[i].text));
  }
  if (top_base == std::numeric_limits<std::size_t>::max()) top_base = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_docstring[i]) region_base[i] = top_base;
  }

  // Second pass: per-line protection.
  std::vector<bool> protected_line(n, false);
  bool doctest_run = false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string_view trimmed = left_trimmed(lines[i].text);
    if (trimmed.empty()) {
      doctest_run = false;  // a blank line ends a doctest example block
      continue;
    }
    if (trimmed.starts_with(">>>")) {
      doctest_run = true;
    }
    bool is_protected = in_fence[i] || doctest_run ||
                        has_protected_prefix(trimmed);
    if (!is_protected &&
        indent_columns(lines[i].text) >= region_base[i] + 4) {
      is_protected = true;
    }
    protected_line[i] = is_protected;
  }

  // Fold line classifications into maximal spans tiling [0, len).
  PromptSegmentation segmentation;
  std::size_t span_start = 0;
  SegmentKind current = protected_line[0] ? SegmentKind::kProtected
                                          : SegmentKind::kNaturalLanguage;
  for (std::size_t i = 1; i < n; ++i) {
    const SegmentKind kind = protected_line[i] ? SegmentKind::kProtected
                                               : SegmentKind::kNaturalLanguage;
    if (kind != current) {
      segmentation.segments.push_back({span_start, lines[i].begin, current});
      span_start = lines[i].begin;
      current = kind;
    }
  }
  segmentation.segments.push_back({span_start, prompt.size(), current});
  return segmentation;
}

}  // namespace qrbench
