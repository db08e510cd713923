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

#include "triage/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "triage/corpus.hpp"
#include "triage/error.hpp"
#include "triage/metrics.hpp"
#include "triage/pipeline.hpp"
#include "triage/policies.hpp"
#include "triage/simulator.hpp"
#include "triage/solver.hpp"
#include "triage/stats.hpp"
#include "triage/synth.hpp"

namespace triage::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string data;
  std::optional<Day> boundary;
  std::string policy = "dabt";
  double alpha = 0.5;
  std::uint64_t seed = 42;
  std::optional<double> L;
  std::string out = "out";
  std::vector<int> topics;
  double C = suitability::kDefaultC;
  int lda_iterations = cost::kDefaultLdaIterations;
  int epochs = suitability::kDefaultEpochs;
  std::optional<Day> end_day;
  std::string precedence = "same_developer";
  std::string artifacts;
  std::vector<double> alphas = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                0.6, 0.7, 0.8, 0.9, 1.0};
  std::string positional;
  int synth_bugs = synth::SynthOptions{}.n_bugs;
};

std::string EnvName(const std::string& flag) {
  std::string name = kEnvPrefix;
  for (char c : flag) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(
                                 static_cast<unsigned char>(c)));
  }
  return name;
}

template <typename T>
CLI::Option* Flag(CLI::App& app, const std::string& name, T& target,
                  const std::string& help) {
  return app.add_option("--" + name, target, help)->envname(EnvName(name));
}

pipeline::PipelineConfig MakeConfig(const Options& o) {
  if (o.data.empty()) throw ValidationError("--data is required");
  if (!o.boundary) throw ValidationError("--boundary is required");
  pipeline::PipelineConfig c;
  c.boundary_day = *o.boundary;
  c.seed = o.seed;
  c.horizon_days = o.L;
  c.end_day = o.end_day;
  c.alpha = o.alpha;
  c.C = o.C;
  c.svm_epochs = o.epochs;
  if (!o.topics.empty()) c.topic_grid = o.topics;
  c.lda_iterations = o.lda_iterations;
  c.mode = solver::ParsePrecedenceMode(o.precedence);
  c.Validate();
  return c;
}

std::vector<policy::PolicyKind> PolicyList(const std::string& names) {
  if (names == "all") return policy::AllPolicies();
  std::vector<policy::PolicyKind> out;
  std::stringstream ss(names);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(policy::ParsePolicy(item));
  if (out.empty()) throw ValidationError("empty policy list");
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << text;
}

struct Loaded {
  pipeline::PipelineConfig config;
  pipeline::PreparedData data;
  pipeline::TrainedModels models;
};

Loaded LoadAndTrain(const Options& o, std::ostream& out) {
  Loaded l{MakeConfig(o), {}, {}};
  l.data = pipeline::PrepareData(corpus::LoadEvents(o.data), l.config);
  if (!o.artifacts.empty()) {
    l.models = pipeline::LoadModels(o.artifacts);
  } else {
    out << "training models on " << l.data.split.train.size()
        << " bugs\n";
    l.models = pipeline::TrainModels(l.data, l.config);
  }
  return l;
}

void WriteRun(const fs::path& dir, const sim::SimulationResult& r,
              const metrics::MetricsReport& report) {
  std::ostringstream log, daily, decisions;
  sim::WriteOutcomeLog(log, r);
  sim::WriteDailyCsv(daily, r);
  sim::WriteDecisionLog(decisions, r);
  WriteText(dir / (r.policy + "_log.jsonl"), log.str());
  WriteText(dir / (r.policy + "_daily.csv"), daily.str());
  WriteText(dir / (r.policy + "_decisions.jsonl"), decisions.str());
  pipeline::WriteJsonFile(dir / (r.policy + "_report.json"),
                          metrics::ToJson(report));
}

void PrintComparison(const fs::path& dir,
                     const std::vector<metrics::MetricsReport>& reports,
                     std::ostream& out) {
  const auto table = metrics::ComparePolicies(reports);
  std::ostringstream csv;
  metrics::WriteComparisonCsv(csv, table);
  WriteText(dir / "comparison.csv", csv.str());
  metrics::WriteComparisonText(out, table);
}

int RunValidate(const Options& o, std::ostream& out) {
  const std::string path = o.positional.empty() ? o.data : o.positional;
  if (path.empty()) throw ValidationError("validate needs a data file");
  const auto records = corpus::LoadEvents(path);
  out << "ok: " << records.size() << " records\n";
  return 0;
}

int RunPrepare(const Options& o, std::ostream& out) {
  const auto config = MakeConfig(o);
  const auto data =
      pipeline::PrepareData(corpus::LoadEvents(o.data), config);
  pipeline::SavePrepared(o.out, data);
  corpus::WriteCleaningLog(out, data.clean.summary);
  out << "L = " << stats::FormatDouble(data.horizon_days)
      << ", active developers = " << data.profiles.size() << '\n';
  return 0;
}

int RunTrain(const Options& o, std::ostream& out) {
  Options fresh = o;
  fresh.artifacts.clear();
  const auto l = LoadAndTrain(fresh, out);
  pipeline::SavePrepared(o.out, l.data);
  pipeline::SaveModels(o.out, l.models);
  out << "topics = " << l.models.topic_model.num_topics()
      << ", vocabulary = " << l.models.vocabulary.size() << " terms\n";
  return 0;
}

int RunSimulate(const Options& o, std::ostream& out) {
  const auto kinds = PolicyList(o.policy);
  const auto l = LoadAndTrain(o, out);
  fs::create_directories(o.out);
  pipeline::SavePrepared(o.out, l.data);
  const auto scores = pipeline::ScoreBugs(l.models, l.data.split.test);
  std::vector<metrics::MetricsReport> reports;
  for (auto kind : kinds) {
    const auto r = pipeline::RunPolicy(l.data, scores, kind, o.alpha, l.config);
    reports.push_back(metrics::ComputeReport(r, l.data.profiles));
    WriteRun(o.out, r, reports.back());
  }
  PrintComparison(o.out, reports, out);
  return 0;
}

int RunReport(const Options& o, std::ostream& out) {
  const fs::path dir = o.out;
  const auto profiles =
      pipeline::ProfilesFromJson(pipeline::ReadJsonFile(dir / "profiles.json"));
  const auto summary = pipeline::ReadJsonFile(dir / "summary.json");
  const double L = o.L.value_or(summary.at("horizon_days_used").get<double>());
  std::vector<metrics::MetricsReport> reports;
  for (auto kind : policy::AllPolicies()) {
    const std::string name = policy::PolicyName(kind);
    const fs::path log = dir / (name + "_log.jsonl");
    if (!fs::exists(log)) continue;
    std::ifstream lf(log), df(dir / (name + "_daily.csv"));
    const auto outcomes = sim::ReadOutcomeLog(lf);
    const auto samples = sim::ReadDailyCsv(df);
    reports.push_back(
        metrics::ComputeReport(name, outcomes, samples, profiles, L));
  }
  if (reports.empty()) {
    throw ValidationError("no policy logs in " + dir.string());
  }
  PrintComparison(dir, reports, out);
  return 0;
}

int RunSweep(const Options& o, std::ostream& out) {
  const auto l = LoadAndTrain(o, out);
  const auto scores = pipeline::ScoreBugs(l.models, l.data.split.test);
  const auto points = metrics::SweepAlpha(o.alphas, [&](double a) {
    return pipeline::RunAndReport(l.data, scores, policy::PolicyKind::kDabt,
                                  a, l.config);
  });
  fs::create_directories(o.out);
  std::ostringstream csv;
  metrics::WriteSweepCsv(csv, points);
  WriteText(fs::path(o.out) / "sweep.csv", csv.str());
  out << csv.str();
  return 0;
}

int RunSolve(const Options& o, std::ostream& out) {
  if (o.positional.empty()) throw ValidationError("solve needs an instance");
  auto j = pipeline::ReadJsonFile(o.positional);
  auto instance = solver::InstanceFromJson(j);
  const auto variant = j.contains("variant")
                           ? solver::ParseVariant(j.at("variant"))
                           : solver::Variant::kDabt;
  const auto solution = solver::Solve(instance, variant);
  for (const auto& a : solution.assignments) {
    out << "bug " << a.bug << " -> developer " << a.dev << '\n';
  }
  std::string value = stats::FormatDouble(solution.objective);
  if (value.find_first_of(".en") == std::string::npos) value += ".0";
  out << "objective " << value << '\n';
  return 0;
}

int RunSynth(const Options& o, std::ostream& out) {
  synth::SynthOptions so;
  so.seed = o.seed;
  so.n_bugs = o.synth_bugs;
  const auto records = synth::GenerateCorpus(so);
  std::ostringstream text;
  corpus::WriteEvents(text, records);
  const fs::path path = fs::path(o.positional.empty() ? o.data : o.positional);
  if (path.empty()) throw ValidationError("synth needs an output file");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  WriteText(path, text.str());
  out << "wrote " << records.size() << " records to " << path.string()
      << '\n';
  return 0;
}

}  // namespace

int Dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Bug triage replay laboratory", "triagelab"};
  app.set_config("--config", "", "INI file with flag=value lines");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  Flag(app, "data", o.data, "bug event file (JSON Lines)");
  Flag(app, "boundary", o.boundary, "last day of the training phase");
  Flag(app, "policy", o.policy,
       "actual, cbr, costriage, rabt, dabt, a comma list or all");
  Flag(app, "alpha", o.alpha, "suitability/cost trade-off in [0, 1]");
  Flag(app, "seed", o.seed, "random seed");
  Flag(app, "L", o.L, "capacity horizon in days (default: derived)");
  Flag(app, "out", o.out, "output directory");
  Flag(app, "topics", o.topics, "candidate topic counts")->delimiter(',');
  Flag(app, "C", o.C, "classifier regularization");
  Flag(app, "lda-iterations", o.lda_iterations, "Gibbs sweeps per fit");
  Flag(app, "epochs", o.epochs, "classifier epochs");
  Flag(app, "end-day", o.end_day, "last simulated day");
  Flag(app, "precedence", o.precedence, "same_developer or any_developer");
  Flag(app, "artifacts", o.artifacts, "reuse models saved by train");
  Flag(app, "alphas", o.alphas, "sweep grid")->delimiter(',');
  Flag(app, "synth-bugs", o.synth_bugs, "developer-handled synthetic bugs");

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Options&, std::ostream&);
    bool positional;
  };
  const std::vector<Sub> subs = {
      {"validate", "check a bug event file", RunValidate, true},
      {"prepare", "clean the corpus and write the summary", RunPrepare, false},
      {"train", "fit and save the models", RunTrain, false},
      {"simulate", "replay the test phase under one or more policies",
       RunSimulate, false},
      {"report", "recompute reports from saved logs", RunReport, false},
      {"sweep", "DABT accuracy and overdue across alpha", RunSweep, false},
      {"solve", "solve one assignment instance", RunSolve, true},
      {"synth", "write the synthetic mini-corpus", RunSynth, true},
  };
  std::vector<CLI::App*> handles;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    if (s.positional) sub->add_option("file", o.positional, "input file");
    handles.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "triagelab: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!handles[i]->parsed()) continue;
    try {
      return subs[i].run(o, out);
    } catch (const std::exception& e) {
      err << "triagelab " << subs[i].name << ": " << e.what() << '\n';
      return 1;
    }
  }
  err << app.help();
  return 2;
}

}  // namespace triage::cli
