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

#include "triage/costmodel.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "triage/error.hpp"
#include "triage/rng.hpp"

namespace triage::cost {
namespace {

// Two groups of documents over disjoint halves of a 10-word vocabulary.
std::vector<WordIds> TwoClusterCorpus(int docs_per_group, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<WordIds> docs;
  for (int g = 0; g < 2; ++g) {
    for (int i = 0; i < docs_per_group; ++i) {
      WordIds d;
      for (int t = 0; t < 20; ++t) {
        d.push_back(static_cast<std::uint32_t>(5 * g + rng.Below(5)));
      }
      docs.push_back(std::move(d));
    }
  }
  return docs;
}

int Dominant(const std::vector<double>& theta) {
  return static_cast<int>(std::max_element(theta.begin(), theta.end()) -
                          theta.begin());
}

// Independent computation of the topic-count measure: singular values
// straight from an SVD of phi.
double ArunOracle(const LdaFit& fit) {
  const int K = fit.model.num_topics();
  const auto V = static_cast<Eigen::Index>(fit.model.vocab_size());
  Eigen::MatrixXd phi(K, V);
  for (int k = 0; k < K; ++k) {
    for (Eigen::Index w = 0; w < V; ++w) {
      phi(k, w) = fit.model.Phi(k, static_cast<std::uint32_t>(w));
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi);
  std::vector<double> cm1(svd.singularValues().data(),
                          svd.singularValues().data() + K);
  std::vector<double> cm2(K, 0.0);
  for (std::size_t d = 0; d < fit.doc_topic.size(); ++d) {
    for (int k = 0; k < K; ++k) {
      cm2[k] += fit.doc_lengths[d] * fit.doc_topic[d][k];
    }
  }
  auto norm = [](std::vector<double>& v) {
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= s;
    std::sort(v.rbegin(), v.rend());
  };
  norm(cm1);
  norm(cm2);
  double kl = 0.0;
  for (int k = 0; k < K; ++k) {
    const double p = std::max(cm1[k], 1e-300), q = std::max(cm2[k], 1e-300);
    kl += p * std::log(p / q) + q * std::log(q / p);
  }
  return kl;
}

LdaOptions Quick(std::uint64_t seed) {
  LdaOptions o;
  o.iterations = 200;
  o.seed = seed;
  return o;
}

TEST(FitLdaTest, RejectsOneTopicAndEmptyCorpus) {
  const auto docs = TwoClusterCorpus(3, 1);
  EXPECT_THROW(FitLda(docs, 10, 1, Quick(1)), ValidationError);
  const std::vector<WordIds> empty = {{}, {}};
  EXPECT_THROW(FitLda(empty, 10, 2, Quick(1)), ValidationError);
}

TEST(FitLdaTest, PhiRowsAreDistributions) {
  const auto docs = TwoClusterCorpus(10, 2);
  for (int k : {2, 3, 7}) {
    const auto fit = FitLda(docs, 10, k, Quick(4));
    for (int t = 0; t < k; ++t) {
      const auto row = fit.model.TopicRow(t);
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9);
      for (double p : row) EXPECT_GE(p, 0.0);
    }
    EXPECT_DOUBLE_EQ(fit.model.alpha(), 50.0 / k);
    EXPECT_DOUBLE_EQ(fit.model.beta(), 0.01);
  }
}

TEST(FitLdaTest, SameSeedSameModel) {
  const auto docs = TwoClusterCorpus(10, 2);
  const auto a = FitLda(docs, 10, 3, Quick(5));
  const auto b = FitLda(docs, 10, 3, Quick(5));
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(TopicModel::FromJson(nlohmann::json::parse(a.model.ToJson().dump())),
            a.model);
}

TEST(FitLdaTest, DisjointVocabulariesSeparate) {
  const auto docs = TwoClusterCorpus(20, 3);
  const auto fit = FitLda(docs, 10, 2, Quick(6));
  // Dominant topic of each group, then purity over all documents.
  int agree = 0;
  const int first = Dominant(fit.doc_topic[0]);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const int expected = d < 20 ? first : 1 - first;
    if (Dominant(fit.doc_topic[d]) == expected) ++agree;
  }
  EXPECT_GE(agree / 40.0, 0.9);
}

TEST(ArunMeasureTest, MatchesSvdOracle) {
  const auto docs = TwoClusterCorpus(15, 7);
  for (int k : {2, 4, 8}) {
    const auto fit = FitLda(docs, 10, k, Quick(8));
    EXPECT_NEAR(ArunMeasure(fit), ArunOracle(fit), 1e-9) << "K=" << k;
  }
}

TEST(SelectTopicCountTest, SingleCandidate) {
  const auto docs = TwoClusterCorpus(5, 1);
  const std::vector<int> grid = {5};
  EXPECT_EQ(SelectTopicCount(docs, 10, grid, Quick(1)).best, 5);
}

TEST(SelectTopicCountTest, TwoClustersPreferTwoTopics) {
  const auto docs = TwoClusterCorpus(20, 9);
  const std::vector<int> grid = {8, 2};
  const auto sel = SelectTopicCount(docs, 10, grid, Quick(10));
  ASSERT_EQ(sel.measures.size(), 2u);
  EXPECT_EQ(sel.measures[0].first, 2);
  EXPECT_LT(sel.measures[0].second, sel.measures[1].second);
  EXPECT_EQ(sel.best, 2);
  EXPECT_EQ(sel.best_fit.model.num_topics(), 2);
}

TEST(SelectTopicCountTest, TiesGoToSmallerCount) {
  // A corpus of one repeated word: every fit puts everything in the same
  // proportions, so measures can tie; the smaller K must win then.
  const std::vector<WordIds> docs = {{0, 0}, {0, 0}};
  const std::vector<int> grid = {3, 2};
  const auto sel = SelectTopicCount(docs, 1, grid, Quick(1));
  const double m2 = sel.measures[0].second, m3 = sel.measures[1].second;
  EXPECT_EQ(sel.best, m3 < m2 ? 3 : 2);
  EXPECT_THROW(SelectTopicCount(docs, 1, std::vector<int>{}, Quick(1)),
               ValidationError);
}

TEST(InferTopicTest, EmptyDocumentIsGlobal) {
  const auto m = TopicModel::FromPhi(2, 2, {0.5, 0.5, 0.5, 0.5}, 25, 0.01, 1);
  EXPECT_EQ(InferTopic(m, {}), kGlobalTopic);
}

TEST(InferTopicTest, PureTopicDocument) {
  // Topic 0 owns words 0-1, topic 1 owns words 2-3.
  const auto m = TopicModel::FromPhi(
      2, 4, {0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5, 0.5}, 0.1, 0.01, 3);
  EXPECT_EQ(InferTopic(m, {0, 1, 0, 1, 1}), 0);
  EXPECT_EQ(InferTopic(m, {2, 3, 3, 2}), 1);
}

TEST(InferTopicTest, Deterministic) {
  const auto docs = TwoClusterCorpus(10, 2);
  const auto fit = FitLda(docs, 10, 3, Quick(5));
  for (const auto& d : docs) {
    EXPECT_EQ(InferTopic(fit.model, d), InferTopic(fit.model, d));
  }
}

TEST(InferTopicTest, TrainingDocumentsKeepTheirCluster) {
  const auto docs = TwoClusterCorpus(20, 3);
  const auto fit = FitLda(docs, 10, 2, Quick(6));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    EXPECT_EQ(InferTopic(fit.model, docs[d]),
              InferTopic(fit.model, docs[d < 20 ? 0 : 20]));
  }
  EXPECT_NE(InferTopic(fit.model, docs[0]), InferTopic(fit.model, docs[20]));
}

std::vector<DevId> Devs(int n) {
  std::vector<DevId> v;
  for (int i = 1; i <= n; ++i) v.push_back(DevId(i));
  return v;
}

TEST(BuildCostMatrixTest, MeanPerDeveloperAndTopic) {
  const std::vector<FixObservation> obs = {
      {DevId(1), 0, 2}, {DevId(1), 0, 4}, {DevId(2), 1, 6},
      {DevId(3), 0, 1}, {DevId(3), 1, 3}, {DevId(3), 1, 8},
      {DevId(9), 0, 100}, {DevId(2), kGlobalTopic, 50}};
  const auto devs = Devs(3);
  const auto m = BuildCostMatrix(obs, devs, 2);
  EXPECT_EQ(m.value(0, 0), 3.0);
  EXPECT_EQ(m.source(0, 1), CellSource::kMissing);
  EXPECT_EQ(m.source(1, 0), CellSource::kMissing);
  EXPECT_EQ(m.value(1, 1), 6.0);
  EXPECT_EQ(m.value(2, 0), 1.0);
  EXPECT_EQ(m.value(2, 1), 5.5);
  EXPECT_EQ(m.CountSource(CellSource::kObserved), 4u);
  EXPECT_DOUBLE_EQ(m.global_mean(), (3.0 + 6.0 + 1.0 + 5.5) / 4);
  EXPECT_FALSE(m.IsComplete());
}

TEST(FillMissingCfTest, SingleObservedCellFillsEverything) {
  const std::vector<FixObservation> obs = {{DevId(2), 1, 7}};
  const auto devs = Devs(3);
  const auto m = FillMissingCf(BuildCostMatrix(obs, devs, 3));
  for (std::size_t d = 0; d < 3; ++d) {
    for (int k = 0; k < 3; ++k) EXPECT_EQ(m.value(d, k), 7.0);
  }
  EXPECT_TRUE(m.IsComplete());
  EXPECT_EQ(m.source(1, 1), CellSource::kObserved);
  EXPECT_EQ(m.source(0, 0), CellSource::kGlobalMean);
}

TEST(FillMissingCfTest, IdenticalDevelopersCopy) {
  const std::vector<FixObservation> obs = {
      {DevId(1), 0, 3}, {DevId(1), 1, 5}, {DevId(2), 0, 3}};
  const auto devs = Devs(2);
  const auto m = FillMissingCf(BuildCostMatrix(obs, devs, 2));
  EXPECT_DOUBLE_EQ(m.value(1, 1), 5.0);
  EXPECT_EQ(m.source(1, 1), CellSource::kCollaborative);
}

TEST(FillMissingCfTest, HandComputedWeightedAverage) {
  // dev0 = (2, 4, ?), dev1 = (4, 2, 6), dev2 = (1, 2, 9)
  const std::vector<FixObservation> obs = {
      {DevId(1), 0, 2}, {DevId(1), 1, 4}, {DevId(2), 0, 4}, {DevId(2), 1, 2},
      {DevId(2), 2, 6}, {DevId(3), 0, 1}, {DevId(3), 1, 2}, {DevId(3), 2, 9}};
  const auto devs = Devs(3);
  const auto m = FillMissingCf(BuildCostMatrix(obs, devs, 3));
  // cosine over topics {0, 1}
  const double s1 = (2 * 4 + 4 * 2) / (std::sqrt(20.0) * std::sqrt(20.0));
  const double s2 = (2 * 1 + 4 * 2) / (std::sqrt(20.0) * std::sqrt(5.0));
  EXPECT_NEAR(m.value(0, 2), (s1 * 6 + s2 * 9) / (s1 + s2), 1e-12);
  EXPECT_NEAR(*DeveloperSimilarity(m, 0, 1), s1, 1e-12);
}

TEST(FillMissingCfTest, ObservedCellsUntouchedAndAllPositive) {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    std::vector<FixObservation> obs;
    const int n = 1 + static_cast<int>(rng.Below(20));
    for (int i = 0; i < n; ++i) {
      obs.push_back({DevId(1 + static_cast<std::int64_t>(rng.Below(5))),
                     static_cast<int>(rng.Below(4)),
                     1.0 + static_cast<double>(rng.Below(20))});
    }
    const auto devs = Devs(5);
    const auto before = BuildCostMatrix(obs, devs, 4);
    const auto after = FillMissingCf(before);
    EXPECT_TRUE(after.IsComplete());
    for (std::size_t d = 0; d < 5; ++d) {
      for (int k = 0; k < 4; ++k) {
        EXPECT_GT(after.value(d, k), 0.0);
        if (before.source(d, k) == CellSource::kObserved) {
          EXPECT_EQ(after.value(d, k), before.value(d, k));
          EXPECT_EQ(after.source(d, k), CellSource::kObserved);
        }
      }
    }
    EXPECT_EQ(CostMatrix::FromJson(nlohmann::json::parse(after.ToJson().dump())),
              after);
  }
}

TEST(FillMissingCfTest, NothingObserved) {
  const auto devs = Devs(2);
  EXPECT_THROW(FillMissingCf(BuildCostMatrix({}, devs, 2)), ValidationError);
}

TEST(CostMatrixTest, GlobalTopicUsesObservedMean) {
  const std::vector<FixObservation> obs = {{DevId(1), 0, 2}, {DevId(2), 1, 6}};
  const auto devs = Devs(2);
  const auto m = FillMissingCf(BuildCostMatrix(obs, devs, 2));
  EXPECT_DOUBLE_EQ(m.Cost(0, kGlobalTopic), 4.0);
  EXPECT_DOUBLE_EQ(m.Cost(1, 1), 6.0);
}

}  // namespace
}  // namespace triage::cost
