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

#include "qrbench/attack.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "qrbench/error.hpp"
#include "qrbench/rng.hpp"

namespace qrbench {

AttackKind parse_attack_kind(std::string_view name) {
  if (name == "char") return AttackKind::kChar;
  if (name == "word") return AttackKind::kWord;
  if (name == "sentence") return AttackKind::kSentence;
  throw ValidationError("unknown attack kind: '" + std::string(name) +
                        "' (expected char, word or sentence)");
}

std::string_view attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::kChar:
      return "char";
    case AttackKind::kWord:
      return "word";
    case AttackKind::kSentence:
      return "sentence";
  }
  return "unknown";
}

void AttackConfig::validate() const {
  auto probability_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!probability_ok(char_change_prob)) {
    throw ValidationError("char_change_prob must be in [0,1]");
  }
  if (!probability_ok(word_replace_prob)) {
    throw ValidationError("word_replace_prob must be in [0,1]");
  }
  if (char_max_changes < 0) {
    throw ValidationError("char_max_changes must be >= 0");
  }
  if (word_max_synonyms < 0) {
    throw ValidationError("word_max_synonyms must be >= 0");
  }
}

namespace {

void require_kind(const AttackConfig& cfg, AttackKind expected,
                  const char* op) {
  cfg.validate();
  if (cfg.kind != expected) {
    throw ValidationError(std::string(op) + ": config kind is '" +
                          std::string(attack_kind_name(cfg.kind)) +
                          "', expected '" +
                          std::string(attack_kind_name(expected)) + "'");
  }
}

}  // namespace

PerturbedPrompt attack_char(std::string_view prompt,
                            const PromptSegmentation& seg,
                            const AttackConfig& cfg) {
  require_kind(cfg, AttackKind::kChar, "attack_char");

  std::vector<std::size_t> eligible;  // absolute offsets of a-z bytes in NL
  for (const Segment& span : seg.segments) {
    if (span.kind != SegmentKind::kNaturalLanguage) continue;
    for (std::size_t i = span.begin; i < span.end; ++i) {
      const char c = prompt[i];
      if (c >= 'a' && c <= 'z') eligible.push_back(i);
    }
  }

  // Edit budget: half-up rounding of prob * |eligible|, clamped by the cap.
  const std::size_t budget = static_cast<std::size_t>(std::floor(
      cfg.char_change_prob * static_cast<double>(eligible.size()) + 0.5));
  const std::size_t n =
      std::min({budget, static_cast<std::size_t>(cfg.char_max_changes),
                eligible.size()});

  PerturbedPrompt result;
  result.original = std::string(prompt);
  result.perturbed = std::string(prompt);
  result.segmentation = seg;
  result.config = cfg;
  if (n == 0) return result;

  Rng rng(cfg.seed);
  std::vector<std::size_t> picks =
      rng.sample_without_replacement(eligible.size(), n);
  std::vector<std::size_t> offsets;
  offsets.reserve(picks.size());
  for (std::size_t pick : picks) offsets.push_back(eligible[pick]);
  std::sort(offsets.begin(), offsets.end());

  for (std::size_t offset : offsets) {
    const char before = result.perturbed[offset];
    const char after =
        static_cast<char>(std::toupper(static_cast<unsigned char>(before)));
    result.perturbed[offset] = after;
    result.edits.push_back({offset, offset + 1, std::string(1, before),
                            std::string(1, after)});
  }
  return result;
}

namespace {

struct Token {
  std::size_t begin;  // offset within the NL span text
  std::size_t end;
  std::string_view text;
};

// Word tokens: a letter run, optionally continued through interior
// apostrophes or hyphens with a letter on both sides.
std::vector<Token> word_tokens(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto is_letter = [&](std::size_t pos) {
    return pos < text.size() &&
           std::isalpha(static_cast<unsigned char>(text[pos])) != 0;
  };
  while (i < text.size()) {
    if (!is_letter(i)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size()) {
      if (is_letter(i)) {
        ++i;
      } else if ((text[i] == '\'' || text[i] == '-') && is_letter(i + 1)) {
        i += 2;
      } else {
        break;
      }
    }
    tokens.push_back({start, i, text.substr(start, i - start)});
  }
  return tokens;
}

std::string lower_copy(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool is_content_pos(PartOfSpeech pos) {
  return pos == PartOfSpeech::kNoun || pos == PartOfSpeech::kVerb ||
         pos == PartOfSpeech::kAdjective || pos == PartOfSpeech::kAdverb;
}

}  // namespace

PerturbedPrompt attack_word(std::string_view prompt,
                            const PromptSegmentation& seg,
                            const AttackConfig& cfg, SynonymSource& synonyms,
                            const PosTagger* tagger,
                            const StopwordSet* stopwords) {
  require_kind(cfg, AttackKind::kWord, "attack_word");
  static const DefaultPosTagger default_tagger;
  static const DefaultStopwords default_stopwords;
  const PosTagger& pos_tagger = tagger ? *tagger : default_tagger;
  const StopwordSet& stop = stopwords ? *stopwords : default_stopwords;

  PerturbedPrompt result;
  result.original = std::string(prompt);
  result.segmentation = seg;
  result.config = cfg;

  Rng rng(cfg.seed);
  std::string perturbed;
  perturbed.reserve(prompt.size());

  for (const Segment& span : seg.segments) {
    const std::string_view span_text = segment_text(prompt, span);
    if (span.kind == SegmentKind::kProtected) {
      perturbed.append(span_text);
      continue;
    }
    std::size_t copied = 0;  // within span_text
    for (const Token& token : word_tokens(span_text)) {
      if (stop.contains(token.text)) continue;
      const PartOfSpeech pos = pos_tagger.tag(token.text);
      if (!is_content_pos(pos)) continue;
      // The replacement decision precedes synonym lookup: a selected word
      // with no candidates stays unchanged but still consumed its draw.
      if (rng.next_double() >= cfg.word_replace_prob) continue;
      std::vector<std::string> candidates =
          synonyms.lookup(lower_copy(token.text), pos);
      if (candidates.size() >
          static_cast<std::size_t>(cfg.word_max_synonyms)) {
        candidates.resize(static_cast<std::size_t>(cfg.word_max_synonyms));
      }
      if (candidates.empty()) continue;
      std::string replacement =
          candidates[rng.below(candidates.size())];
      std::replace(replacement.begin(), replacement.end(), '_', ' ');
      if (!replacement.empty()) {
        const bool upper =
            std::isupper(static_cast<unsigned char>(token.text[0])) != 0;
        replacement[0] = static_cast<char>(
            upper ? std::toupper(static_cast<unsigned char>(replacement[0]))
                  : std::tolower(static_cast<unsigned char>(replacement[0])));
      }
      if (replacement == token.text) continue;

      perturbed.append(span_text.substr(copied, token.begin - copied));
      perturbed.append(replacement);
      copied = token.end;
      result.edits.push_back({span.begin + token.begin, span.begin + token.end,
                              std::string(token.text), replacement});
    }
    perturbed.append(span_text.substr(copied));
  }

  result.perturbed = std::move(perturbed);
  return result;
}

PerturbedPrompt attack_sentence(std::string_view prompt,
                                const PromptSegmentation& seg,
                                const AttackConfig& cfg,
                                Translator& translator) {
  require_kind(cfg, AttackKind::kSentence, "attack_sentence");

  // Translate every NL span first so a failure yields no partial output.
  std::vector<std::string> replacements;
  std::size_t nl_index = 0;
  for (const Segment& span : seg.segments) {
    if (span.kind != SegmentKind::kNaturalLanguage) continue;
    const std::string_view span_text = segment_text(prompt, span);
    try {
      const std::string pivot =
          translator.translate(span_text, cfg.pivot_src, cfg.pivot_tgt);
      replacements.push_back(
          translator.translate(pivot, cfg.pivot_tgt, cfg.pivot_src));
    } catch (const std::exception& e) {
      throw AttackError("sentence attack: translation of NL span " +
                            std::to_string(nl_index) + " failed: " + e.what(),
                        nl_index);
    }
    ++nl_index;
  }

  PerturbedPrompt result;
  result.original = std::string(prompt);
  result.segmentation = seg;
  result.config = cfg;

  std::string perturbed;
  perturbed.reserve(prompt.size());
  std::size_t replacement_index = 0;
  for (const Segment& span : seg.segments) {
    const std::string_view span_text = segment_text(prompt, span);
    if (span.kind == SegmentKind::kProtected) {
      perturbed.append(span_text);
      continue;
    }
    const std::string& translated = replacements[replacement_index++];
    perturbed.append(translated);
    if (translated != span_text) {
      result.edits.push_back({span.begin, span.end, std::string(span_text),
                              translated});
    }
  }
  result.perturbed = std::move(perturbed);
  return result;
}

PerturbedPrompt attack_prompt(std::string_view prompt,
                              const PromptSegmentation& seg,
                              const AttackConfig& cfg,
                              const AttackResources& resources) {
  switch (cfg.kind) {
    case AttackKind::kChar:
      return attack_char(prompt, seg, cfg);
    case AttackKind::kWord:
      if (resources.synonyms == nullptr) {
        throw ValidationError("word attack requires a synonym source");
      }
      return attack_word(prompt, seg, cfg, *resources.synonyms,
                         resources.tagger, resources.stopwords);
    case AttackKind::kSentence:
      if (resources.translator == nullptr) {
        throw ValidationError("sentence attack requires a translator");
      }
      return attack_sentence(prompt, seg, cfg, *resources.translator);
  }
  throw ValidationError("attack_prompt: unhandled attack kind");
}

AttackedCorpus attack_corpus(const std::vector<Problem>& problems,
                             const AttackConfig& cfg,
                             const AttackResources& resources) {
  cfg.validate();
  AttackedCorpus out;
  out.problems.reserve(problems.size());
  out.prompts.reserve(problems.size());
  for (const Problem& problem : problems) {
    AttackConfig per_problem = cfg;
    per_problem.seed = derive_seed(cfg.seed, problem.task_id);
    const PromptSegmentation seg = segment_prompt(problem.prompt);
    PerturbedPrompt perturbed =
        attack_prompt(problem.prompt, seg, per_problem, resources);
    Problem attacked = problem;
    attacked.prompt = perturbed.perturbed;
    out.problems.push_back(std::move(attacked));
    out.prompts.push_back(std::move(perturbed));
  }
  return out;
}

}  // namespace qrbench
