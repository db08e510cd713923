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

#include "triage/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "triage/error.hpp"

namespace triage::pipeline {

void PipelineConfig::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1]");
  }
  if (boundary_day < 0) throw ValidationError("boundary day is negative");
  if (horizon_days && !(*horizon_days > 0.0)) {
    throw ValidationError("L must be positive");
  }
  if (!(C > 0.0)) throw ValidationError("C must be positive");
  if (svm_epochs < 1) throw ValidationError("epochs must be at least 1");
  if (lda_iterations < 1) {
    throw ValidationError("LDA iterations must be at least 1");
  }
  if (topic_grid.empty()) throw ValidationError("empty topic grid");
  for (int k : topic_grid) {
    if (k < 2) throw ValidationError("topic counts must be at least 2");
  }
}

PreparedData PrepareData(std::vector<corpus::BugRecord> raw,
                         const PipelineConfig& config) {
  config.Validate();
  PreparedData data;
  data.raw = std::move(raw);
  data.clean = corpus::CleanBugs(data.raw, {config.boundary_day, {}, {}});
  data.split = corpus::SplitTrainTest(data.clean.kept, config.boundary_day);
  const std::set<DevId> active(data.clean.summary.active_developers.begin(),
                               data.clean.summary.active_developers.end());
  for (auto& p : corpus::SelectActiveDevelopers(data.split.train)) {
    if (!active.contains(p.id)) continue;
    p.is_active = true;
    data.profiles.push_back(std::move(p));
  }
  data.horizon_days = config.horizon_days.value_or(
      data.clean.summary.horizon_days);
  if (!(data.horizon_days > 0.0)) {
    throw ValidationError("derived L is not positive; pass --L");
  }
  return data;
}

text::TokenizedDoc Tokenize(const corpus::BugRecord& record) {
  return text::PreprocessText(record.id, record.summary, record.description);
}

TrainedModels TrainModels(const PreparedData& data,
                          const PipelineConfig& config) {
  config.Validate();
  const auto& train = data.split.train;
  if (train.empty()) throw ValidationError("no training bugs after cleaning");
  std::vector<text::TokenizedDoc> docs;
  for (const auto& r : train) docs.push_back(Tokenize(r));

  TrainedModels m;
  m.vocabulary = text::BuildVocabulary(docs);

  std::vector<suitability::LabeledVector> labeled;
  for (std::size_t i = 0; i < train.size(); ++i) {
    labeled.push_back(
        {text::TfidfTransform(docs[i], m.vocabulary), *train[i].actual_assignee});
  }
  const auto& devs = data.clean.summary.active_developers;
  m.classifier = suitability::TrainClassifier(
      labeled, devs, m.vocabulary.size(),
      {config.C, config.svm_epochs, config.seed});

  std::vector<cost::WordIds> words;
  for (const auto& d : docs) words.push_back(text::ToWordIds(d, m.vocabulary));
  cost::LdaOptions lda;
  lda.iterations = config.lda_iterations;
  lda.seed = config.seed;
  auto selection = cost::SelectTopicCount(words, m.vocabulary.size(),
                                          config.topic_grid, lda);
  m.topic_model = std::move(selection.best_fit.model);
  m.topic_measures = std::move(selection.measures);

  std::vector<cost::FixObservation> obs;
  for (std::size_t i = 0; i < train.size(); ++i) {
    obs.push_back({*train[i].actual_assignee,
                   cost::InferTopic(m.topic_model, words[i]),
                   static_cast<double>(*train[i].FixingTime())});
  }
  m.cost_matrix = cost::FillMissingCf(
      cost::BuildCostMatrix(obs, devs, m.topic_model.num_topics()));
  return m;
}

policy::ScoreTable ScoreBugs(const TrainedModels& models,
                             std::span<const corpus::BugRecord> bugs) {
  policy::ScoreTable table;
  table.developers = models.cost_matrix.developers();
  for (const auto& r : bugs) {
    const auto doc = Tokenize(r);
    const auto x = text::TfidfTransform(doc, models.vocabulary);
    policy::BugScores row;
    row.suitability = suitability::PredictSuitability(models.classifier, r.id,
                                                      x, table.developers)
                          .values;
    row.topic = cost::InferTopic(models.topic_model,
                                 text::ToWordIds(doc, models.vocabulary));
    for (std::size_t k = 0; k < table.developers.size(); ++k) {
      row.cost.push_back(models.cost_matrix.Cost(k, row.topic));
    }
    table.rows.emplace(r.id, std::move(row));
  }
  return table;
}

sim::SimulationResult RunPolicy(const PreparedData& data,
                                const policy::ScoreTable& scores,
                                policy::PolicyKind kind, double alpha,
                                const PipelineConfig& config) {
  const auto history = sim::BuildHistory(data.split.test);
  const auto policy = policy::MakePolicy(kind, {alpha, config.mode}, &history);
  sim::SimulationConfig sc;
  sc.boundary_day = config.boundary_day;
  sc.horizon_days = data.horizon_days;
  sc.end_day = config.end_day;
  return sim::RunSimulation(sc, data.raw, data.split.test, scores, *policy);
}

metrics::MetricsReport RunAndReport(const PreparedData& data,
                                    const policy::ScoreTable& scores,
                                    policy::PolicyKind kind, double alpha,
                                    const PipelineConfig& config) {
  return metrics::ComputeReport(
      RunPolicy(data, scores, kind, alpha, config), data.profiles);
}

nlohmann::ordered_json ProfilesToJson(
    std::span<const corpus::DeveloperProfile> profiles) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : profiles) {
    arr.push_back({{"id", p.id.value},
                   {"name", p.name},
                   {"fixed_bug_count", p.fixed_bug_count},
                   {"components", p.components_experienced},
                   {"active", p.is_active}});
  }
  return arr;
}

std::vector<corpus::DeveloperProfile> ProfilesFromJson(
    const nlohmann::json& j) {
  std::vector<corpus::DeveloperProfile> out;
  for (const auto& e : j) {
    corpus::DeveloperProfile p;
    p.id = DevId(e.at("id").get<std::int64_t>());
    p.name = e.at("name").get<std::string>();
    p.fixed_bug_count = e.at("fixed_bug_count").get<int>();
    p.components_experienced =
        e.at("components").get<std::set<std::string>>();
    p.is_active = e.at("active").get<bool>();
    out.push_back(std::move(p));
  }
  return out;
}

void WriteJsonFile(const std::filesystem::path& path,
                   const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void SavePrepared(const std::filesystem::path& dir, const PreparedData& data) {
  std::filesystem::create_directories(dir);
  auto summary = corpus::ToJson(data.clean.summary);
  summary["horizon_days_used"] = data.horizon_days;
  WriteJsonFile(dir / "summary.json", summary);
  WriteJsonFile(dir / "profiles.json", ProfilesToJson(data.profiles));
  std::ofstream log(dir / "cleaning_log.csv");
  corpus::WriteCleaningLog(log, data.clean.summary);
}

void SaveModels(const std::filesystem::path& dir, const TrainedModels& m) {
  std::filesystem::create_directories(dir);
  WriteJsonFile(dir / "vocabulary.json", m.vocabulary.ToJson());
  WriteJsonFile(dir / "classifier.json", m.classifier.ToJson());
  auto topics = m.topic_model.ToJson();
  auto measures = nlohmann::ordered_json::array();
  for (const auto& [k, v] : m.topic_measures) measures.push_back({k, v});
  nlohmann::ordered_json doc;
  doc["model"] = std::move(topics);
  doc["arun_measures"] = std::move(measures);
  WriteJsonFile(dir / "topic_model.json", doc);
  WriteJsonFile(dir / "cost_matrix.json", m.cost_matrix.ToJson());
}

TrainedModels LoadModels(const std::filesystem::path& dir) {
  TrainedModels m;
  m.vocabulary = text::Vocabulary::FromJson(ReadJsonFile(dir / "vocabulary.json"));
  m.classifier =
      suitability::LinearModel::FromJson(ReadJsonFile(dir / "classifier.json"));
  const auto topics = ReadJsonFile(dir / "topic_model.json");
  m.topic_model = cost::TopicModel::FromJson(topics.at("model"));
  for (const auto& e : topics.at("arun_measures")) {
    m.topic_measures.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
  }
  m.cost_matrix =
      cost::CostMatrix::FromJson(ReadJsonFile(dir / "cost_matrix.json"));
  return m;
}

}  // namespace triage::pipeline
