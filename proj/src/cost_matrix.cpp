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
#include <limits>

#include "triage/costmodel.hpp"
#include "triage/error.hpp"

namespace triage::cost {
namespace {

const char* SourceName(CellSource s) {
  switch (s) {
    case CellSource::kMissing:
      return "MISSING";
    case CellSource::kObserved:
      return "OBSERVED";
    case CellSource::kCollaborative:
      return "CF";
    case CellSource::kGlobalMean:
      return "GLOBAL_MEAN";
  }
  return "MISSING";
}

CellSource ParseSource(const std::string& name) {
  if (name == "OBSERVED") return CellSource::kObserved;
  if (name == "CF") return CellSource::kCollaborative;
  if (name == "GLOBAL_MEAN") return CellSource::kGlobalMean;
  if (name == "MISSING") return CellSource::kMissing;
  throw ValidationError("unknown cell provenance '" + name + "'");
}

}  // namespace

CostMatrix::CostMatrix(std::vector<DevId> developers, int num_topics)
    : developers_(std::move(developers)),
      num_topics_(num_topics),
      values_(developers_.size() * num_topics,
              0.0),
      sources_(developers_.size() * num_topics, CellSource::kMissing) {}

void CostMatrix::Set(std::size_t dev, int topic, double value,
                     CellSource source) {
  values_[dev * num_topics_ + topic] = value;
  sources_[dev * num_topics_ + topic] = source;
}

double CostMatrix::Cost(std::size_t dev, int topic) const {
  if (topic == kGlobalTopic) return global_mean_;
  return value(dev, topic);
}

bool CostMatrix::IsComplete() const {
  return CountSource(CellSource::kMissing) == 0;
}

std::size_t CostMatrix::CountSource(CellSource source) const {
  return static_cast<std::size_t>(
      std::count(sources_.begin(), sources_.end(), source));
}

CostMatrix BuildCostMatrix(std::span<const FixObservation> observations,
                           std::span<const DevId> developers, int num_topics) {
  std::vector<DevId> devs(developers.begin(), developers.end());
  CostMatrix m(devs, num_topics);
  std::vector<double> sums(devs.size() * num_topics, 0.0);
  std::vector<int> counts(devs.size() * num_topics, 0);
  for (const auto& obs : observations) {
    auto it = std::find(devs.begin(), devs.end(), obs.dev);
    if (it == devs.end()) continue;
    if (obs.topic == kGlobalTopic) continue;
    if (obs.topic < 0 || obs.topic >= num_topics) {
      throw ValidationError("observation topic out of range");
    }
    const auto cell =
        static_cast<std::size_t>(it - devs.begin()) * num_topics + obs.topic;
    sums[cell] += obs.days;
    ++counts[cell];
  }
  double observed_sum = 0.0;
  int observed_cells = 0;
  for (std::size_t d = 0; d < devs.size(); ++d) {
    for (int k = 0; k < num_topics; ++k) {
      const auto cell = d * num_topics + k;
      if (counts[cell] == 0) continue;
      const double mean = sums[cell] / counts[cell];
      m.Set(d, k, mean, CellSource::kObserved);
      observed_sum += mean;
      ++observed_cells;
    }
  }
  m.global_mean_ = observed_cells > 0 ? observed_sum / observed_cells : 0.0;
  return m;
}

std::optional<double> DeveloperSimilarity(const CostMatrix& m, std::size_t a,
                                          std::size_t b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  bool shared = false;
  for (int k = 0; k < m.num_topics(); ++k) {
    if (m.source(a, k) != CellSource::kObserved ||
        m.source(b, k) != CellSource::kObserved) {
      continue;
    }
    shared = true;
    dot += m.value(a, k) * m.value(b, k);
    na += m.value(a, k) * m.value(a, k);
    nb += m.value(b, k) * m.value(b, k);
  }
  if (!shared || na == 0.0 || nb == 0.0) return std::nullopt;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

CostMatrix FillMissingCf(const CostMatrix& matrix) {
  const std::size_t D = matrix.developers().size();
  const int K = matrix.num_topics();
  if (matrix.CountSource(CellSource::kObserved) == 0) {
    throw ValidationError("collaborative filtering needs an observed cell");
  }
  CostMatrix out = matrix;
  for (std::size_t d = 0; d < D; ++d) {
    for (int k = 0; k < K; ++k) {
      if (matrix.source(d, k) == CellSource::kObserved) continue;
      double num = 0.0;
      double den = 0.0;
      for (std::size_t other = 0; other < D; ++other) {
        if (other == d || matrix.source(other, k) != CellSource::kObserved) {
          continue;
        }
        const auto sim = DeveloperSimilarity(matrix, d, other);
        if (!sim || *sim <= 0.0) continue;
        num += *sim * matrix.value(other, k);
        den += *sim;
      }
      if (den > 0.0) {
        out.Set(d, k, num / den, CellSource::kCollaborative);
        continue;
      }
      double col_sum = 0.0;
      int col_n = 0;
      for (std::size_t other = 0; other < D; ++other) {
        if (matrix.source(other, k) == CellSource::kObserved) {
          col_sum += matrix.value(other, k);
          ++col_n;
        }
      }
      if (col_n > 0) {
        out.Set(d, k, col_sum / col_n, CellSource::kCollaborative);
      } else {
        out.Set(d, k, matrix.global_mean(), CellSource::kGlobalMean);
      }
    }
  }
  return out;
}

nlohmann::ordered_json CostMatrix::ToJson() const {
  nlohmann::ordered_json j;
  j["num_topics"] = num_topics_;
  j["global_mean"] = global_mean_;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t d = 0; d < developers_.size(); ++d) {
    auto cells = nlohmann::ordered_json::array();
    for (int k = 0; k < num_topics_; ++k) {
      nlohmann::ordered_json cell;
      cell["topic"] = k;
      if (source(d, k) == CellSource::kMissing) {
        cell["days"] = nullptr;
      } else {
        cell["days"] = value(d, k);
      }
      cell["source"] = SourceName(source(d, k));
      cells.push_back(std::move(cell));
    }
    rows.push_back({{"developer", developers_[d].value},
                    {"cells", std::move(cells)}});
  }
  j["rows"] = std::move(rows);
  return j;
}

CostMatrix CostMatrix::FromJson(const nlohmann::json& j) {
  std::vector<DevId> devs;
  for (const auto& row : j.at("rows")) {
    devs.push_back(DevId(row.at("developer").get<std::int64_t>()));
  }
  CostMatrix m(devs, j.at("num_topics").get<int>());
  m.global_mean_ = j.at("global_mean").get<double>();
  std::size_t d = 0;
  for (const auto& row : j.at("rows")) {
    for (const auto& cell : row.at("cells")) {
      const int k = cell.at("topic").get<int>();
      if (k < 0 || k >= m.num_topics_) throw ValidationError("topic range");
      const auto source = ParseSource(cell.at("source").get<std::string>());
      const double days = cell.at("days").is_null()
                              ? 0.0
                              : cell.at("days").get<double>();
      m.Set(d, k, days, source);
    }
    ++d;
  }
  return m;
}

}  // namespace triage::cost
