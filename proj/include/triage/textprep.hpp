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

#ifndef TRIAGE_TEXTPREP_HPP_
#define TRIAGE_TEXTPREP_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "triage/ids.hpp"

namespace triage::text {

inline constexpr std::size_t kMaxTokenLength = 20;
inline constexpr int kDefaultMinDf = 2;

// Identifies the bundled stop-word list and lemma rules.
std::string_view PreprocessorVersion();

struct TokenizedDoc {
  BugId bug;
  std::vector<std::string> tokens;
};

// Merges summary and description, lowercases, splits on anything that is
// not an ASCII letter or digit, then drops pure numbers, tokens longer than
// kMaxTokenLength, single characters and stop words. Remaining tokens pass
// through a rule-based lemmatizer (noun inflections plus an exception
// table), which is an approximation of dictionary lemmatization.
TokenizedDoc PreprocessText(BugId bug, std::string_view summary,
                            std::string_view description);

bool IsStopWord(std::string_view token);
std::string Lemmatize(std::string_view token);

class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const { return terms_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  int min_df() const { return min_df_; }

  const std::string& term(std::size_t index) const { return terms_[index]; }
  std::size_t df(std::size_t index) const { return df_[index]; }
  std::optional<std::uint32_t> IndexOf(std::string_view term) const;

  // Smoothed inverse document frequency, ln((1 + N) / (1 + df)) + 1.
  double Idf(std::size_t index) const;

  nlohmann::ordered_json ToJson() const;
  static Vocabulary FromJson(const nlohmann::json& j);

  bool operator==(const Vocabulary&) const = default;

 private:
  friend Vocabulary BuildVocabulary(const std::vector<TokenizedDoc>&, int);

  std::vector<std::string> terms_;  // lexicographic
  std::vector<std::size_t> df_;
  std::map<std::string, std::uint32_t, std::less<>> index_;
  std::size_t n_docs_ = 0;
  int min_df_ = kDefaultMinDf;
};

// Terms sorted lexicographically; terms with document frequency below
// min_df are dropped. Throws ValidationError when every doc is empty.
Vocabulary BuildVocabulary(const std::vector<TokenizedDoc>& docs,
                           int min_df = kDefaultMinDf);

// Sparse vector sorted by index.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool empty() const { return entries.empty(); }
  double Norm() const;
  double Dot(std::span<const double> dense) const;
};

// Raw term count times smoothed idf, L2-normalized. Out-of-vocabulary
// tokens are ignored; a doc with no known tokens maps to the zero vector.
SparseVector TfidfTransform(const TokenizedDoc& doc, const Vocabulary& vocab);

// In-vocabulary token indices in document order (for topic models).
std::vector<std::uint32_t> ToWordIds(const TokenizedDoc& doc,
                                     const Vocabulary& vocab);

}  // namespace triage::text

#endif  // TRIAGE_TEXTPREP_HPP_
