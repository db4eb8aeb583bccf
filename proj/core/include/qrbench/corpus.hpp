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

#ifndef QRBENCH_CORPUS_HPP_
#define QRBENCH_CORPUS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrbench {

/// One benchmark task: a natural-language prompt with an embedded test-case
/// example, a hidden test suite, and the entry-point identifier the suite
/// exercises.
struct Problem {
  std::string task_id;
  std::string prompt;
  std::string entry_point;
  std::string test_suite;
  std::optional<std::string> canonical_solution;
};

enum class CorpusFormat {
  kHumanEval,  // signature+docstring prompts, suites define check(candidate)
  kMbpp,       // prose prompts with an example assert, suites are plain asserts
};

CorpusFormat parse_corpus_format(std::string_view name);
std::string_view corpus_format_name(CorpusFormat format);

enum class SegmentKind { kNaturalLanguage, kProtected };

/// Half-open character span [begin, end) of the prompt.
struct Segment {
  std::size_t begin;
  std::size_t end;
  SegmentKind kind;

  bool operator==(const Segment&) const = default;
};

/// Ordered segments that exactly tile [0, prompt.size()): concatenating the
/// segment texts in order reproduces the prompt byte-exactly.
struct PromptSegmentation {
  std::vector<Segment> segments;

  /// Spans with kind == kNaturalLanguage, in order.
  std::vector<Segment> nl_spans() const;
  /// Spans with kind == kProtected, in order.
  std::vector<Segment> protected_spans() const;
};

inline std::string_view segment_text(std::string_view prompt,
                                     const Segment& segment) {
  return prompt.substr(segment.begin, segment.end - segment.begin);
}

/// Loads a line-delimited corpus file. Each line is a JSON record with
/// fields task_id, prompt, entry_point, test and optional canonical_solution
/// (the de-facto schema of the HumanEval/MBPP benchmark families; both
/// formats share it).
///
/// Rejects malformed lines (ParseError naming the line), missing or
/// mistyped fields (SchemaError), duplicate task_ids, empty prompt or test,
/// and entry points that appear nowhere in the prompt or test as an
/// identifier token (SchemaError).
std::vector<Problem> load_corpus(const std::filesystem::path& path,
                                 CorpusFormat format);

/// Writes problems back out in the same line-delimited schema.
void save_corpus(const std::filesystem::path& path,
                 const std::vector<Problem>& problems);

/// Splits a prompt into attackable natural-language spans and protected
/// code/test spans. Whole lines are classified; a line is PROTECTED when,
/// after left-trim, it starts with "assert", ">>>", "def ", "class ",
/// "import " or "from ", when it belongs to a doctest example block (a
/// ">>>" line and its continuation/expected-output lines up to the next
/// blank line), when it sits inside a ``` fenced block, or when it is
/// indented four or more columns past its region's base indentation
/// (docstring bodies form their own region so ordinary docstring prose is
/// not swallowed). Always succeeds; a prompt of only protected lines yields
/// zero NL spans.
PromptSegmentation segment_prompt(std::string_view prompt);

/// True when `identifier` occurs in `text` as a whole identifier token
/// ([A-Za-z_][A-Za-z0-9_]* with no identifier character on either side).
bool contains_identifier(std::string_view text, std::string_view identifier);

}  // namespace qrbench

#endif  // QRBENCH_CORPUS_HPP_
