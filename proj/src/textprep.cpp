// Copyright 2026 The triagelab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "triage/textprep.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>

#include "triage/error.hpp"

namespace triage::text {
namespace {

// Sorted, so lookups can use binary search.
constexpr std::array<std::string_view, 174> kStopWords = {
    "a",          "about",   "above",    "after",      "again",   "against",
    "all",        "also",    "am",       "an",         "and",     "any",
    "are",        "aren",    "as",       "at",         "be",      "because",
    "been",       "before",  "being",    "below",      "between", "both",
    "but",        "by",      "can",      "cannot",     "could",   "couldn",
    "did",        "didn",    "do",       "does",       "doesn",   "doing",
    "don",        "down",    "during",   "each",       "either",  "else",
    "etc",        "ever",    "every",    "few",        "for",     "from",
    "further",    "get",     "gets",     "got",        "had",     "hadn",
    "has",        "hasn",    "have",     "haven",      "having",  "he",
    "her",        "here",    "hers",     "herself",    "him",     "himself",
    "his",        "how",     "however",  "i",          "ie",      "if",
    "in",         "into",    "is",       "isn",        "it",      "its",
    "itself",     "just",    "let",      "ll",         "may",     "me",
    "might",      "more",    "most",     "much",       "must",    "mustn",
    "my",         "myself",  "neither",  "no",         "nor",     "not",
    "now",        "of",      "off",      "often",      "on",      "once",
    "only",       "or",      "other",    "others",     "otherwise", "ought",
    "our",        "ours",    "ourselves", "out",       "over",    "own",
    "please",     "re",      "same",     "seem",       "seems",   "shall",
    "shan",       "she",     "should",   "shouldn",    "since",   "so",
    "some",       "still",   "such",     "than",       "that",    "the",
    "their",      "theirs",  "them",     "themselves", "then",    "there",
    "these",      "they",    "this",     "those",      "though",  "through",
    "thus",       "to",      "too",      "under",      "until",   "up",
    "upon",       "us",      "ve",       "very",       "via",     "was",
    "wasn",       "we",      "were",     "weren",      "what",    "when",
    "where",      "whether", "which",    "while",      "who",     "whom",
    "why",        "will",    "with",     "won",        "would",   "wouldn",
};

const std::unordered_map<std::string_view, std::string_view>& Exceptions() {
  static const std::unordered_map<std::string_view, std::string_view> kTable =
      {{"children", "child"},   {"men", "man"},
       {"women", "woman"},      {"feet", "foot"},
       {"teeth", "tooth"},      {"mice", "mouse"},
       {"people", "person"},    {"indices", "index"},
       {"matrices", "matrix"},  {"vertices", "vertex"},
       {"analyses", "analysis"}, {"crises", "crisis"},
       {"criteria", "criterion"}, {"phenomena", "phenomenon"},
       {"caches", "cache"},     {"niches", "niche"},
       {"aches", "ache"},       {"files", "file"},
       {"types", "type"},       {"values", "value"},
       {"lines", "line"},       {"cases", "case"},
       {"pages", "page"},       {"images", "image"},
       {"messages", "message"}, {"packages", "package"},
       {"modules", "module"},   {"variables", "variable"},
       {"tables", "table"},     {"nodes", "node"},
       {"codes", "code"},       {"names", "name"},
       {"uses", "use"},         {"changes", "change"},
       {"releases", "release"}, {"updates", "update"},
       {"sources", "source"},   {"resources", "resource"},
       {"responses", "response"}, {"databases", "database"},
       {"leaves", "leaf"},      {"lives", "life"},
       {"selves", "self"},      {"halves", "half"},
       {"data", "data"},
       {"series", "series"},    {"species", "species"},
       {"news", "news"},        {"bytes", "byte"},
       {"sizes", "size"},       {"styles", "style"},
       {"profiles", "profile"}, {"devices", "device"},
       {"services", "service"}, {"interfaces", "interface"},
       {"instances", "instance"}, {"templates", "template"}};
  return kTable;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool IsNumber(std::string_view token) {
  return std::all_of(token.begin(), token.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

}  // namespace

std::string_view PreprocessorVersion() { return "triage-textprep-v1"; }

bool IsStopWord(std::string_view token) {
  return std::binary_search(kStopWords.begin(), kStopWords.end(), token);
}

std::string Lemmatize(std::string_view token) {
  if (auto it = Exceptions().find(token); it != Exceptions().end()) {
    return std::string(it->second);
  }
  std::string t(token);
  if (t.size() <= 3) return t;
  if (EndsWith(t, "ss") || EndsWith(t, "us") || EndsWith(t, "is")) return t;
  if (EndsWith(t, "ies") && t.size() > 4) {
    return t.substr(0, t.size() - 3) + "y";
  }
  if (EndsWith(t, "sses") || EndsWith(t, "xes") || EndsWith(t, "ches") ||
      EndsWith(t, "shes") || EndsWith(t, "zzes")) {
    return t.substr(0, t.size() - 2);
  }
  if (EndsWith(t, "s")) return t.substr(0, t.size() - 1);
  return t;
}

TokenizedDoc PreprocessText(BugId bug, std::string_view summary,
                            std::string_view description) {
  TokenizedDoc doc;
  doc.bug = bug;
  auto emit = [&doc](std::string& raw) {
    if (raw.empty()) return;
    std::string tok;
    tok.swap(raw);
    if (IsNumber(tok) || tok.size() > kMaxTokenLength || tok.size() < 2) return;
    if (IsStopWord(tok)) return;
    std::string lemma = Lemmatize(tok);
    if (lemma.size() < 2 || IsStopWord(lemma)) return;
    doc.tokens.push_back(std::move(lemma));
  };
  std::string current;
  for (std::string_view part : {summary, description}) {
    for (char ch : part) {
      const auto c = static_cast<unsigned char>(ch);
      if (c < 0x80 && std::isalnum(c)) {
        current.push_back(static_cast<char>(std::tolower(c)));
      } else {
        emit(current);
      }
    }
    emit(current);
  }
  return doc;
}

std::optional<std::uint32_t> Vocabulary::IndexOf(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::Idf(std::size_t index) const {
  return std::log((1.0 + static_cast<double>(n_docs_)) /
                  (1.0 + static_cast<double>(df_[index]))) +
         1.0;
}

nlohmann::ordered_json Vocabulary::ToJson() const {
  nlohmann::ordered_json j;
  j["preprocessor"] = PreprocessorVersion();
  j["n_docs"] = n_docs_;
  j["min_df"] = min_df_;
  auto terms = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    terms.push_back({{"term", terms_[i]}, {"index", i}, {"df", df_[i]}});
  }
  j["terms"] = std::move(terms);
  return j;
}

Vocabulary Vocabulary::FromJson(const nlohmann::json& j) {
  Vocabulary v;
  v.n_docs_ = j.at("n_docs").get<std::size_t>();
  v.min_df_ = j.at("min_df").get<int>();
  const auto& terms = j.at("terms");
  v.terms_.resize(terms.size());
  v.df_.resize(terms.size());
  for (const auto& t : terms) {
    const auto idx = t.at("index").get<std::size_t>();
    if (idx >= terms.size()) throw ValidationError("vocabulary index range");
    v.terms_[idx] = t.at("term").get<std::string>();
    v.df_[idx] = t.at("df").get<std::size_t>();
  }
  for (std::size_t i = 0; i < v.terms_.size(); ++i) {
    v.index_.emplace(v.terms_[i], static_cast<std::uint32_t>(i));
  }
  if (v.index_.size() != v.terms_.size()) {
    throw ValidationError("vocabulary has duplicate terms");
  }
  return v;
}

Vocabulary BuildVocabulary(const std::vector<TokenizedDoc>& docs, int min_df) {
  std::map<std::string, std::size_t> df;
  bool any_tokens = false;
  for (const auto& doc : docs) {
    std::set<std::string_view> unique(doc.tokens.begin(), doc.tokens.end());
    any_tokens = any_tokens || !unique.empty();
    for (auto term : unique) ++df[std::string(term)];
  }
  if (!any_tokens) {
    throw ValidationError("cannot build a vocabulary from empty documents");
  }
  Vocabulary v;
  v.n_docs_ = docs.size();
  v.min_df_ = min_df;
  for (const auto& [term, count] : df) {
    if (count < static_cast<std::size_t>(min_df)) continue;
    v.index_.emplace(term, static_cast<std::uint32_t>(v.terms_.size()));
    v.terms_.push_back(term);
    v.df_.push_back(count);
  }
  return v;
}

double SparseVector::Norm() const {
  double ss = 0.0;
  for (const auto& [i, w] : entries) ss += w * w;
  return std::sqrt(ss);
}

double SparseVector::Dot(std::span<const double> dense) const {
  double sum = 0.0;
  for (const auto& [i, w] : entries) sum += w * dense[i];
  return sum;
}

SparseVector TfidfTransform(const TokenizedDoc& doc, const Vocabulary& vocab) {
  std::map<std::uint32_t, double> tf;
  for (const auto& tok : doc.tokens) {
    if (auto idx = vocab.IndexOf(tok)) tf[*idx] += 1.0;
  }
  SparseVector v;
  for (const auto& [idx, count] : tf) {
    v.entries.emplace_back(idx, count * vocab.Idf(idx));
  }
  const double norm = v.Norm();
  if (norm > 0.0) {
    for (auto& [idx, w] : v.entries) w /= norm;
  }
  return v;
}

std::vector<std::uint32_t> ToWordIds(const TokenizedDoc& doc,
                                     const Vocabulary& vocab) {
  std::vector<std::uint32_t> ids;
  for (const auto& tok : doc.tokens) {
    if (auto idx = vocab.IndexOf(tok)) ids.push_back(*idx);
  }
  return ids;
}

}  // namespace triage::text
