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

#ifndef TRIAGE_PIPELINE_HPP_
#define TRIAGE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "triage/corpus.hpp"
#include "triage/costmodel.hpp"
#include "triage/metrics.hpp"
#include "triage/policies.hpp"
#include "triage/simulator.hpp"
#include "triage/solver.hpp"
#include "triage/suitability.hpp"
#include "triage/textprep.hpp"

namespace triage::pipeline {

struct PipelineConfig {
  Day boundary_day = 0;
  std::uint64_t seed = 42;
  std::optional<double> horizon_days;  // overrides the derived L
  std::optional<Day> end_day;
  double alpha = 0.5;
  double C = suitability::kDefaultC;
  int svm_epochs = suitability::kDefaultEpochs;
  std::vector<int> topic_grid = cost::DefaultTopicGrid();
  int lda_iterations = cost::kDefaultLdaIterations;
  solver::PrecedenceMode mode = solver::PrecedenceMode::kSameDeveloper;

  void Validate() const;
};

struct PreparedData {
  std::vector<corpus::BugRecord> raw;
  corpus::CleanResult clean;
  corpus::TrainTestSplit split;  // of the cleaned records
  // Active developers with the components they fixed in training.
  std::vector<corpus::DeveloperProfile> profiles;
  double horizon_days = 0.0;
};

PreparedData PrepareData(std::vector<corpus::BugRecord> raw,
                         const PipelineConfig& config);

struct TrainedModels {
  text::Vocabulary vocabulary;
  suitability::LinearModel classifier;
  cost::TopicModel topic_model;
  std::vector<std::pair<int, double>> topic_measures;
  cost::CostMatrix cost_matrix;  // after collaborative filling

  bool operator==(const TrainedModels&) const = default;
};

TrainedModels TrainModels(const PreparedData& data,
                          const PipelineConfig& config);

text::TokenizedDoc Tokenize(const corpus::BugRecord& record);

// Suitability rows, topics and costs for `bugs` against the active
// developers of the models.
policy::ScoreTable ScoreBugs(const TrainedModels& models,
                             std::span<const corpus::BugRecord> bugs);

sim::SimulationResult RunPolicy(const PreparedData& data,
                                const policy::ScoreTable& scores,
                                policy::PolicyKind kind, double alpha,
                                const PipelineConfig& config);

metrics::MetricsReport RunAndReport(const PreparedData& data,
                                    const policy::ScoreTable& scores,
                                    policy::PolicyKind kind, double alpha,
                                    const PipelineConfig& config);

// Writes summary.json, cleaning_log.csv and profiles.json.
void SavePrepared(const std::filesystem::path& dir, const PreparedData& data);
// Writes vocabulary.json, classifier.json, topic_model.json and
// cost_matrix.json.
void SaveModels(const std::filesystem::path& dir, const TrainedModels& models);
TrainedModels LoadModels(const std::filesystem::path& dir);

nlohmann::ordered_json ProfilesToJson(
    std::span<const corpus::DeveloperProfile> profiles);
std::vector<corpus::DeveloperProfile> ProfilesFromJson(const nlohmann::json& j);

// Serializes with a trailing newline so repeated writes compare equal.
void WriteJsonFile(const std::filesystem::path& path,
                   const nlohmann::ordered_json& j);
nlohmann::json ReadJsonFile(const std::filesystem::path& path);

}  // namespace triage::pipeline

#endif  // TRIAGE_PIPELINE_HPP_
