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

#ifndef QRBENCH_LEXICON_HPP_
#define QRBENCH_LEXICON_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace qrbench {

enum class PartOfSpeech { kNoun, kVerb, kAdjective, kAdverb, kOther };

PartOfSpeech parse_pos(std::string_view name);
std::string_view pos_name(PartOfSpeech pos);

/// Lexical synonym lookup. Implementations return an ordered candidate list;
/// a returned synonym never equals the query word (case-insensitive).
///
/// Implementations that are not safe for concurrent calls must return false
/// from thread_safe(); the harness serializes access to those.
class SynonymSource {
 public:
  virtual ~SynonymSource() = default;
  virtual std::vector<std::string> lookup(std::string_view word,
                                          PartOfSpeech pos) = 0;
  virtual bool thread_safe() const { return false; }
};

/// Text translation between language codes ("en", "de"). Must be
/// deterministic for fixed inputs within one harness run.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate(std::string_view text, std::string_view src,
                                std::string_view tgt) = 0;
  virtual bool thread_safe() const { return false; }
};

/// Per-token part-of-speech tagging.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual PartOfSpeech tag(std::string_view token) const = 0;
};

/// Membership test for stopwords (never replaced by the word attack).
class StopwordSet {
 public:
  virtual ~StopwordSet() = default;
  virtual bool contains(std::string_view token) const = 0;
};

// ---------------------------------------------------------------------------
// Bundled deterministic defaults. These remove any dependence on external
// NLP models; contract tests use fixed mocks instead.
// ---------------------------------------------------------------------------

/// Suffix-rule tagger: -ly -> adverb; common verbal suffixes and a closed
/// list of frequent imperative verbs -> verb; common adjectival suffixes ->
/// adjective; other alphabetic tokens -> noun; anything else -> Other.
class DefaultPosTagger : public PosTagger {
 public:
  PartOfSpeech tag(std::string_view token) const override;
};

/// Fixed English closed-class word list (articles, pronouns, auxiliaries,
/// prepositions, conjunctions). Case-insensitive.
class DefaultStopwords : public StopwordSet {
 public:
  DefaultStopwords();
  bool contains(std::string_view token) const override;

 private:
  std::unordered_set<std::string> words_;
};

/// In-memory synonym table keyed by (lower-cased word, part of speech).
/// Loadable from a TSV file with lines: word<TAB>pos<TAB>syn1,syn2,...
/// where pos is one of noun|verb|adj|adv. Candidates equal to the headword
/// (case-insensitive) are dropped at insertion.
class MapSynonymSource : public SynonymSource {
 public:
  MapSynonymSource() = default;

  static MapSynonymSource from_tsv(const std::filesystem::path& path);

  void add(std::string_view word, PartOfSpeech pos,
           std::vector<std::string> synonyms);

  std::vector<std::string> lookup(std::string_view word,
                                  PartOfSpeech pos) override;
  bool thread_safe() const override { return true; }

 private:
  std::map<std::pair<std::string, PartOfSpeech>, std::vector<std::string>>
      table_;
};

/// Returns its input unchanged; the degenerate pivot.
class IdentityTranslator : public Translator {
 public:
  std::string translate(std::string_view text, std::string_view /*src*/,
                        std::string_view /*tgt*/) override {
    return std::string(text);
  }
  bool thread_safe() const override { return true; }
};

/// Deterministic stand-in for a round-trip translation model: the forward
/// leg returns its input; the return leg into `target_lang` applies ordered
/// phrase substitutions. Loadable from a TSV of from<TAB>to lines.
class PhraseMapTranslator : public Translator {
 public:
  explicit PhraseMapTranslator(std::string target_lang = "en")
      : target_lang_(std::move(target_lang)) {}

  static PhraseMapTranslator from_tsv(const std::filesystem::path& path,
                                      std::string target_lang = "en");

  void add(std::string_view from, std::string_view to);

  std::string translate(std::string_view text, std::string_view src,
                        std::string_view tgt) override;
  bool thread_safe() const override { return true; }

 private:
  std::string target_lang_;
  std::vector<std::pair<std::string, std::string>> substitutions_;
};

}  // namespace qrbench

#endif  // QRBENCH_LEXICON_HPP_
