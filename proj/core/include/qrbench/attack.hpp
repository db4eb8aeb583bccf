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

#ifndef QRBENCH_ATTACK_HPP_
#define QRBENCH_ATTACK_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qrbench/corpus.hpp"
#include "qrbench/lexicon.hpp"

namespace qrbench {

enum class AttackKind { kChar, kWord, kSentence };

AttackKind parse_attack_kind(std::string_view name);
std::string_view attack_kind_name(AttackKind kind);

struct AttackConfig {
  AttackKind kind = AttackKind::kChar;
  std::uint64_t seed = 0;

  double char_change_prob = 0.5;
  int char_max_changes = 5;

  double word_replace_prob = 0.15;
  int word_max_synonyms = 3;

  std::string pivot_src = "en";
  std::string pivot_tgt = "de";

  /// Throws ValidationError if probabilities leave [0,1] or counts are
  /// negative.
  void validate() const;
};

/// One textual edit, on original-prompt offsets.
struct Edit {
  std::size_t begin;
  std::size_t end;
  std::string before;
  std::string after;
};

/// An attacked prompt plus full provenance. All edits fall inside NL spans
/// of `segmentation`; PROTECTED spans of original and perturbed are
/// byte-identical.
struct PerturbedPrompt {
  std::string original;
  std::string perturbed;
  PromptSegmentation segmentation;
  std::vector<Edit> edits;
  AttackConfig config;
};

/// Uppercases a seeded sample of lowercase letters in the NL spans.
/// Exactly n = min(char_max_changes, round(char_change_prob * |eligible|))
/// characters change (half-up rounding), chosen without replacement;
/// every other byte is untouched.
PerturbedPrompt attack_char(std::string_view prompt,
                            const PromptSegmentation& seg,
                            const AttackConfig& cfg);

/// Replaces content words (tagged noun/verb/adjective/adverb, not
/// stopwords) with a seeded synonym pick, each with probability
/// word_replace_prob. One-for-one token replacement; a selected word with
/// no synonyms is left unchanged; multiword synonyms have underscores
/// mapped to spaces; the original token's first-letter case is preserved.
/// Passing null for tagger or stopwords selects the bundled defaults.
PerturbedPrompt attack_word(std::string_view prompt,
                            const PromptSegmentation& seg,
                            const AttackConfig& cfg, SynonymSource& synonyms,
                            const PosTagger* tagger = nullptr,
                            const StopwordSet* stopwords = nullptr);

/// Back-translates each NL span through the pivot language
/// (span -> pivot_tgt -> pivot_src), independently per span. A translator
/// failure raises AttackError carrying the span index; no partial output.
PerturbedPrompt attack_sentence(std::string_view prompt,
                                const PromptSegmentation& seg,
                                const AttackConfig& cfg,
                                Translator& translator);

/// Non-owning bundle of the pluggable text resources an attack may need.
struct AttackResources {
  SynonymSource* synonyms = nullptr;
  Translator* translator = nullptr;
  const PosTagger* tagger = nullptr;
  const StopwordSet* stopwords = nullptr;
};

/// Dispatches on cfg.kind. Throws ValidationError when a required resource
/// for that kind is missing.
PerturbedPrompt attack_prompt(std::string_view prompt,
                              const PromptSegmentation& seg,
                              const AttackConfig& cfg,
                              const AttackResources& resources);

struct AttackedCorpus {
  std::vector<Problem> problems;         // prompts replaced, rest untouched
  std::vector<PerturbedPrompt> prompts;  // provenance, parallel to problems
};

/// Attacks every prompt of a corpus. Each problem gets its own stream seed
/// derived from (cfg.seed, task_id), so corpus order never changes a
/// problem's perturbation. Runs serially: translator/synonym
/// implementations need not be concurrency-safe.
AttackedCorpus attack_corpus(const std::vector<Problem>& problems,
                             const AttackConfig& cfg,
                             const AttackResources& resources);

}  // namespace qrbench

#endif  // QRBENCH_ATTACK_HPP_
