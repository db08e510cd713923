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

#ifndef TRIAGE_COSTMODEL_HPP_
#define TRIAGE_COSTMODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "triage/ids.hpp"

namespace triage::cost {

// Topic index returned for documents without any in-vocabulary token.
inline constexpr int kGlobalTopic = -1;

inline constexpr int kDefaultLdaIterations = 1000;
inline constexpr int kDefaultFoldInSweeps = 50;
inline constexpr double kDefaultLdaBeta = 0.01;

// A document as vocabulary indices.
using WordIds = std::vector<std::uint32_t>;

struct LdaOptions {
  int iterations = kDefaultLdaIterations;
  std::uint64_t seed = 0;
  // Document-topic prior; <= 0 selects 50 / K.
  double alpha = 0.0;
  double beta = kDefaultLdaBeta;
};

struct LdaFit;

class TopicModel {
 public:
  // Builds a model from an explicit K x V row-major topic-word matrix.
  static TopicModel FromPhi(int num_topics, std::size_t vocab_size,
                            std::vector<double> phi, double alpha,
                            double beta, std::uint64_t seed);

  int num_topics() const { return num_topics_; }
  std::size_t vocab_size() const { return vocab_size_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }
  int iterations() const { return iterations_; }

  // Topic-word probability phi[k][w].
  double Phi(int topic, std::uint32_t word) const {
    return phi_[static_cast<std::size_t>(topic) * vocab_size_ + word];
  }
  std::span<const double> TopicRow(int topic) const {
    return std::span<const double>(phi_).subspan(
        static_cast<std::size_t>(topic) * vocab_size_, vocab_size_);
  }

  nlohmann::ordered_json ToJson() const;
  static TopicModel FromJson(const nlohmann::json& j);

  bool operator==(const TopicModel&) const = default;

 private:
  friend LdaFit FitLda(std::span<const WordIds>, std::size_t, int,
                              const LdaOptions&);

  int num_topics_ = 0;
  std::size_t vocab_size_ = 0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::uint64_t seed_ = 0;
  int iterations_ = 0;
  std::vector<double> phi_;  // K x V, row-major
};

struct LdaFit {
  TopicModel model;
  // theta[d][k] of the final Gibbs state for each training document.
  std::vector<std::vector<double>> doc_topic;
  std::vector<std::size_t> doc_lengths;
};

// Collapsed Gibbs sampling for a fixed number of sweeps. Throws
// ValidationError for K < 2 or a corpus without tokens.
LdaFit FitLda(std::span<const WordIds> docs, std::size_t vocab_size,
              int num_topics, const LdaOptions& options);

// Symmetric KL divergence between the normalized singular values of the
// topic-word matrix and the length-weighted document-topic mixture (both
// sorted in descending order). Lower is better.
double ArunMeasure(const LdaFit& fit);

struct TopicSelection {
  int best = 0;
  std::vector<std::pair<int, double>> measures;  // ascending K
  LdaFit best_fit;
};

std::vector<int> DefaultTopicGrid();

// Fits every candidate K and keeps the one minimizing ArunMeasure; equal
// measures keep the smaller K.
TopicSelection SelectTopicCount(std::span<const WordIds> docs,
                                std::size_t vocab_size,
                                std::span<const int> candidates,
                                const LdaOptions& options);

// Fold-in Gibbs sampling against fixed phi; returns the topic with the
// largest count accumulated over the second half of the sweeps (ties go
// to the smaller index), or kGlobalTopic for an empty document. The
// sampler is seeded from the model, so the result depends only on the
// model and the document.
int InferTopic(const TopicModel& model, const WordIds& doc,
               int sweeps = kDefaultFoldInSweeps);

enum class CellSource { kMissing, kObserved, kCollaborative, kGlobalMean };

struct FixObservation {
  DevId dev;
  int topic = kGlobalTopic;
  double days = 0.0;
};

// Developer x topic fixing-cost table, in days.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::vector<DevId> developers, int num_topics);

  const std::vector<DevId>& developers() const { return developers_; }
  int num_topics() const { return num_topics_; }
  double global_mean() const { return global_mean_; }

  double value(std::size_t dev, int topic) const {
    return values_[dev * num_topics_ + topic];
  }
  CellSource source(std::size_t dev, int topic) const {
    return sources_[dev * num_topics_ + topic];
  }
  void Set(std::size_t dev, int topic, double value, CellSource source);

  // Cost of a bug of `topic` for developer index `dev`; kGlobalTopic maps
  // to the mean of the observed cells.
  double Cost(std::size_t dev, int topic) const;

  bool IsComplete() const;
  std::size_t CountSource(CellSource source) const;

  nlohmann::ordered_json ToJson() const;
  static CostMatrix FromJson(const nlohmann::json& j);

  bool operator==(const CostMatrix&) const = default;

 private:
  friend CostMatrix BuildCostMatrix(std::span<const FixObservation>,
                                    std::span<const DevId>, int);

  std::vector<DevId> developers_;
  int num_topics_ = 0;
  std::vector<double> values_;
  std::vector<CellSource> sources_;
  double global_mean_ = 0.0;
};

// Observed cells hold the mean fixing time of that developer on that
// topic. Observations for unknown developers or kGlobalTopic only feed the
// global mean when they belong to a listed developer.
CostMatrix BuildCostMatrix(std::span<const FixObservation> observations,
                           std::span<const DevId> developers, int num_topics);

// Fills missing cells with user-based collaborative filtering:
//   c(d, k) = sum_{d'} sim(d, d') c(d', k) / sum_{d'} sim(d, d')
// over developers d' != d that observed topic k and share at least one
// observed topic with d (sim is the cosine over the shared topics). When
// no such neighbour exists the topic's observed mean is used, then the
// global observed mean. Observed cells are left as they are. Throws
// ValidationError when nothing is observed.
CostMatrix FillMissingCf(const CostMatrix& matrix);

// Cosine similarity over the topics both developers observed, or nullopt
// when they share none.
std::optional<double> DeveloperSimilarity(const CostMatrix& matrix,
                                          std::size_t a, std::size_t b);

}  // namespace triage::cost

#endif  // TRIAGE_COSTMODEL_HPP_
