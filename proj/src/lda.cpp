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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "triage/costmodel.hpp"
#include "triage/error.hpp"
#include "triage/rng.hpp"

namespace triage::cost {
namespace {

constexpr std::uint64_t kFoldInSalt = 0xD1B54A32D192ED03ULL;

// Draws an index from unnormalized weights given a uniform u in [0, 1).
int SampleIndex(const std::vector<double>& cumulative, double u) {
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<int>(it - cumulative.begin());
}

double SymmetricKl(const std::vector<double>& p, const std::vector<double>& q) {
  constexpr double kFloor = 1e-300;
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = std::max(p[i], kFloor);
    const double b = std::max(q[i], kFloor);
    total += a * std::log(a / b) + b * std::log(b / a);
  }
  return total;
}

std::vector<double> NormalizedDescending(std::vector<double> v) {
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  if (sum > 0.0) {
    for (double& x : v) x /= sum;
  }
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

TopicModel TopicModel::FromPhi(int num_topics, std::size_t vocab_size,
                               std::vector<double> phi, double alpha,
                               double beta, std::uint64_t seed) {
  if (num_topics < 1 || phi.size() != vocab_size * num_topics) {
    throw ValidationError("topic-word matrix has the wrong shape");
  }
  TopicModel m;
  m.num_topics_ = num_topics;
  m.vocab_size_ = vocab_size;
  m.phi_ = std::move(phi);
  m.alpha_ = alpha;
  m.beta_ = beta;
  m.seed_ = seed;
  return m;
}

LdaFit FitLda(std::span<const WordIds> docs, std::size_t vocab_size,
              int num_topics, const LdaOptions& options) {
  if (num_topics < 2) throw ValidationError("LDA needs K >= 2");
  if (options.iterations < 1) throw ValidationError("iterations must be >= 1");
  std::size_t n_tokens = 0;
  for (const auto& doc : docs) {
    for (auto w : doc) {
      if (w >= vocab_size) throw ValidationError("word id out of range");
    }
    n_tokens += doc.size();
  }
  if (n_tokens == 0) throw ValidationError("LDA corpus has no tokens");

  const auto K = static_cast<std::size_t>(num_topics);
  const std::size_t V = vocab_size;
  const double alpha = options.alpha > 0.0 ? options.alpha : 50.0 / num_topics;
  const double beta = options.beta;
  const double v_beta = static_cast<double>(V) * beta;

  Rng rng(options.seed);
  std::vector<std::vector<int>> z(docs.size());
  std::vector<std::vector<int>> n_dk(docs.size(), std::vector<int>(K, 0));
  std::vector<int> n_kw(K * V, 0);
  std::vector<int> n_k(K, 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const int k = static_cast<int>(rng.Below(K));
      z[d][i] = k;
      ++n_dk[d][k];
      ++n_kw[k * V + docs[d][i]];
      ++n_k[k];
    }
  }

  std::vector<double> cumulative(K);
  for (int it = 0; it < options.iterations; ++it) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const std::uint32_t w = docs[d][i];
        int k = z[d][i];
        --n_dk[d][k];
        --n_kw[k * V + w];
        --n_k[k];
        double acc = 0.0;
        for (std::size_t t = 0; t < K; ++t) {
          acc += (n_dk[d][t] + alpha) * (n_kw[t * V + w] + beta) /
                 (n_k[t] + v_beta);
          cumulative[t] = acc;
        }
        k = SampleIndex(cumulative, rng.Uniform());
        z[d][i] = k;
        ++n_dk[d][k];
        ++n_kw[k * V + w];
        ++n_k[k];
      }
    }
  }

  LdaFit fit;
  TopicModel& m = fit.model;
  m.num_topics_ = num_topics;
  m.vocab_size_ = V;
  m.alpha_ = alpha;
  m.beta_ = beta;
  m.seed_ = options.seed;
  m.iterations_ = options.iterations;
  m.phi_.assign(K * V, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    double row_sum = 0.0;
    for (std::size_t w = 0; w < V; ++w) {
      const double p = (n_kw[k * V + w] + beta) / (n_k[k] + v_beta);
      m.phi_[k * V + w] = p;
      row_sum += p;
    }
    for (std::size_t w = 0; w < V; ++w) m.phi_[k * V + w] /= row_sum;
  }
  const double k_alpha = static_cast<double>(K) * alpha;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<double> theta(K);
    for (std::size_t k = 0; k < K; ++k) {
      theta[k] = (n_dk[d][k] + alpha) /
                 (static_cast<double>(docs[d].size()) + k_alpha);
    }
    fit.doc_topic.push_back(std::move(theta));
    fit.doc_lengths.push_back(docs[d].size());
  }
  return fit;
}

double ArunMeasure(const LdaFit& fit) {
  const TopicModel& m = fit.model;
  const int K = m.num_topics();
  const auto V = static_cast<Eigen::Index>(m.vocab_size());
  Eigen::MatrixXd phi(K, V);
  for (int k = 0; k < K; ++k) {
    for (Eigen::Index w = 0; w < V; ++w) {
      phi(k, w) = m.Phi(k, static_cast<std::uint32_t>(w));
    }
  }
  // Singular values of phi are the square roots of the eigenvalues of
  // phi * phi^T, which is only K x K.
  const Eigen::MatrixXd gram = phi * phi.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram,
                                                     Eigen::EigenvaluesOnly);
  std::vector<double> singular(K);
  for (int k = 0; k < K; ++k) {
    singular[k] = std::sqrt(std::max(0.0, eig.eigenvalues()[k]));
  }
  std::vector<double> mixture(K, 0.0);
  for (std::size_t d = 0; d < fit.doc_topic.size(); ++d) {
    for (int k = 0; k < K; ++k) {
      mixture[k] += static_cast<double>(fit.doc_lengths[d]) * fit.doc_topic[d][k];
    }
  }
  return SymmetricKl(NormalizedDescending(std::move(singular)),
                     NormalizedDescending(std::move(mixture)));
}

std::vector<int> DefaultTopicGrid() {
  std::vector<int> grid;
  for (int k = 5; k <= 50; k += 5) grid.push_back(k);
  return grid;
}

TopicSelection SelectTopicCount(std::span<const WordIds> docs,
                                std::size_t vocab_size,
                                std::span<const int> candidates,
                                const LdaOptions& options) {
  std::set<int> grid(candidates.begin(), candidates.end());
  if (grid.empty()) throw ValidationError("empty topic-count grid");
  TopicSelection selection;
  double best_measure = 0.0;
  for (int k : grid) {
    LdaFit fit = FitLda(docs, vocab_size, k, options);
    const double measure = ArunMeasure(fit);
    selection.measures.emplace_back(k, measure);
    if (selection.best == 0 || measure < best_measure) {
      selection.best = k;
      best_measure = measure;
      selection.best_fit = std::move(fit);
    }
  }
  return selection;
}

int InferTopic(const TopicModel& model, const WordIds& doc, int sweeps) {
  if (doc.empty()) return kGlobalTopic;
  const int K = model.num_topics();
  const double alpha = model.alpha();
  Rng rng(model.seed() ^ kFoldInSalt);
  std::vector<int> z(doc.size());
  std::vector<int> counts(K, 0);
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (doc[i] >= model.vocab_size()) {
      throw ValidationError("word id out of range");
    }
    z[i] = static_cast<int>(rng.Below(static_cast<std::uint64_t>(K)));
    ++counts[z[i]];
  }
  std::vector<double> cumulative(K);
  std::vector<long> accumulated(K, 0);
  const int burn_in = sweeps / 2;
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      --counts[z[i]];
      double acc = 0.0;
      for (int k = 0; k < K; ++k) {
        acc += (counts[k] + alpha) * model.Phi(k, doc[i]);
        cumulative[k] = acc;
      }
      z[i] = SampleIndex(cumulative, rng.Uniform());
      ++counts[z[i]];
    }
    if (s >= burn_in) {
      for (int k = 0; k < K; ++k) accumulated[k] += counts[k];
    }
  }
  if (sweeps < 1) {
    for (int k = 0; k < K; ++k) accumulated[k] = counts[k];
  }
  return static_cast<int>(
      std::max_element(accumulated.begin(), accumulated.end()) -
      accumulated.begin());
}

nlohmann::ordered_json TopicModel::ToJson() const {
  nlohmann::ordered_json j;
  j["kind"] = "lda_collapsed_gibbs";
  j["num_topics"] = num_topics_;
  j["vocab_size"] = vocab_size_;
  j["alpha"] = alpha_;
  j["beta"] = beta_;
  j["seed"] = seed_;
  j["iterations"] = iterations_;
  auto rows = nlohmann::ordered_json::array();
  for (int k = 0; k < num_topics_; ++k) {
    auto row = TopicRow(k);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["phi"] = std::move(rows);
  return j;
}

TopicModel TopicModel::FromJson(const nlohmann::json& j) {
  const int K = j.at("num_topics").get<int>();
  const auto V = j.at("vocab_size").get<std::size_t>();
  std::vector<double> phi;
  phi.reserve(K * V);
  for (const auto& row : j.at("phi")) {
    if (row.size() != V) throw ValidationError("phi row has the wrong length");
    for (const auto& x : row) phi.push_back(x.get<double>());
  }
  TopicModel m = FromPhi(K, V, std::move(phi), j.at("alpha").get<double>(),
                         j.at("beta").get<double>(),
                         j.at("seed").get<std::uint64_t>());
  m.iterations_ = j.at("iterations").get<int>();
  return m;
}

}  // namespace triage::cost
