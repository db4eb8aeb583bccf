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

#include "qrbench/lexicon.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "qrbench/error.hpp"

namespace qrbench {

namespace {

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

PartOfSpeech parse_pos(std::string_view name) {
  if (name == "noun") return PartOfSpeech::kNoun;
  if (name == "verb") return PartOfSpeech::kVerb;
  if (name == "adj" || name == "adjective") return PartOfSpeech::kAdjective;
  if (name == "adv" || name == "adverb") return PartOfSpeech::kAdverb;
  if (name == "other") return PartOfSpeech::kOther;
  throw ValidationError("unknown part of speech: '" + std::string(name) + "'");
}

std::string_view pos_name(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::kNoun:
      return "noun";
    case PartOfSpeech::kVerb:
      return "verb";
    case PartOfSpeech::kAdjective:
      return "adj";
    case PartOfSpeech::kAdverb:
      return "adv";
    case PartOfSpeech::kOther:
      return "other";
  }
  return "other";
}

PartOfSpeech DefaultPosTagger::tag(std::string_view token) const {
  if (token.empty()) return PartOfSpeech::kOther;
  for (char c : token) {
    if (std::isalpha(static_cast<unsigned char>(c)) == 0 && c != '\'' &&
        c != '-') {
      return PartOfSpeech::kOther;
    }
  }
  const std::string lower = to_lower(token);

  static const std::unordered_set<std::string> kCommonVerbs = {
      "write",  "count",   "find",    "check",  "return",  "compute",
      "create", "convert", "remove",  "sort",   "reverse", "replace",
      "print",  "take",    "make",    "get",    "set",     "add",
      "split",  "join",    "extract", "filter", "test",    "calculate",
      "accept", "determine"};
  if (kCommonVerbs.count(lower) > 0) return PartOfSpeech::kVerb;

  auto ends_with = [&lower](std::string_view suffix) {
    return lower.size() > suffix.size() + 1 &&
           std::string_view(lower).substr(lower.size() - suffix.size()) ==
               suffix;
  };

  if (ends_with("ly")) return PartOfSpeech::kAdverb;
  for (std::string_view s : {"ing", "ed", "ify", "ize", "ise", "ate", "en"}) {
    if (ends_with(s)) return PartOfSpeech::kVerb;
  }
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "al", "ic",
                             "less", "ish", "est"}) {
    if (ends_with(s)) return PartOfSpeech::kAdjective;
  }
  return PartOfSpeech::kNoun;
}

DefaultStopwords::DefaultStopwords() {
  static constexpr std::array kWords = {
      "a",     "an",    "the",   "is",      "are",    "was",   "were",
      "be",    "been",  "being", "to",      "of",     "in",    "on",
      "at",    "by",    "for",   "with",    "and",    "or",    "nor",
      "not",   "no",    "it",    "its",     "this",   "that",  "these",
      "those", "as",    "from",  "into",    "if",     "then",  "else",
      "do",    "does",  "did",   "done",    "has",    "have",  "had",
      "will",  "would", "can",   "could",   "should", "shall", "may",
      "might", "must",  "i",     "you",     "he",     "she",   "we",
      "they",  "them",  "him",   "her",     "his",    "their", "our",
      "your",  "my",    "me",    "us",      "but",    "than",  "too",
      "so",    "such",  "each",  "any",     "all",    "some",  "both",
      "own",   "same",  "also",  "there",   "here",   "when",  "where",
      "why",   "how",   "what",  "which",   "who",    "whom",  "whose",
      "am",    "until", "while", "about",   "against", "between",
      "through", "during", "before", "after", "above", "below", "up",
      "down",  "out",   "off",   "over",    "under",  "again", "once",
      "per",   "via",   "upon",  "within",  "without"};
  for (const char* word : kWords) {
    words_.insert(word);
  }
}

bool DefaultStopwords::contains(std::string_view token) const {
  return words_.count(to_lower(token)) > 0;
}

MapSynonymSource MapSynonymSource::from_tsv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open synonym file: " + path.string());
  }
  MapSynonymSource source;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string word;
    std::string pos_text;
    std::string candidates;
    if (!std::getline(fields, word, '\t') ||
        !std::getline(fields, pos_text, '\t') ||
        !std::getline(fields, candidates)) {
      throw ParseError(path.filename().string() + ":" +
                       std::to_string(line_number) +
                       ": expected word<TAB>pos<TAB>synonyms");
    }
    std::vector<std::string> synonyms;
    std::istringstream list(candidates);
    std::string candidate;
    while (std::getline(list, candidate, ',')) {
      if (!candidate.empty()) synonyms.push_back(candidate);
    }
    source.add(word, parse_pos(pos_text), std::move(synonyms));
  }
  return source;
}

void MapSynonymSource::add(std::string_view word, PartOfSpeech pos,
                           std::vector<std::string> synonyms) {
  std::vector<std::string> kept;
  kept.reserve(synonyms.size());
  for (std::string& candidate : synonyms) {
    if (!iequals(candidate, word)) {
      kept.push_back(std::move(candidate));
    }
  }
  table_[{to_lower(word), pos}] = std::move(kept);
}

std::vector<std::string> MapSynonymSource::lookup(std::string_view word,
                                                  PartOfSpeech pos) {
  const auto it = table_.find({to_lower(word), pos});
  if (it == table_.end()) return {};
  return it->second;
}

PhraseMapTranslator PhraseMapTranslator::from_tsv(
    const std::filesystem::path& path, std::string target_lang) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open translation map: " + path.string());
  }
  PhraseMapTranslator translator(std::move(target_lang));
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.filename().string() + ":" +
                       std::to_string(line_number) + ": expected from<TAB>to");
    }
    translator.add(line.substr(0, tab), line.substr(tab + 1));
  }
  return translator;
}

void PhraseMapTranslator::add(std::string_view from, std::string_view to) {
  substitutions_.emplace_back(std::string(from), std::string(to));
}

std::string PhraseMapTranslator::translate(std::string_view text,
                                           std::string_view /*src*/,
                                           std::string_view tgt) {
  if (tgt != target_lang_) {
    return std::string(text);  // forward leg of the pivot: pass through
  }
  std::string out(text);
  for (const auto& [from, to] : substitutions_) {
    if (from.empty()) continue;
    std::size_t pos = 0;
    while ((pos = out.find(from, pos)) != std::string::npos) {
      out.replace(pos, from.size(), to);
      pos += to.size();
    }
  }
  return out;
}

}  // namespace qrbench
