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

#include "triage/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "triage/error.hpp"
#include "triage/stats.hpp"

namespace triage::sim {
namespace {

constexpr double kCapacitySlack = 1e-9;

Day CeilDay(double x) { return static_cast<Day>(std::ceil(x - 1e-9)); }

}  // namespace

void SimulationConfig::Validate() const {
  if (!(horizon_days > 0.0) || !std::isfinite(horizon_days)) {
    throw ValidationError("horizon L must be positive");
  }
}

policy::HistoryTable BuildHistory(
    const std::vector<corpus::BugRecord>& test_bugs) {
  policy::HistoryTable history;
  for (const auto& r : test_bugs) {
    if (!r.actual_assignee || !r.assigned_at || !r.resolved_at) continue;
    history.emplace(r.id, policy::HistoricalAssignment{
                              *r.actual_assignee, *r.assigned_at,
                              *r.resolved_at});
  }
  return history;
}

Simulator::Simulator(const SimulationConfig& config,
                     const std::vector<corpus::BugRecord>& records,
                     const std::vector<corpus::BugRecord>& test_bugs,
                     const policy::ScoreTable& scores,
                     const policy::Policy& policy)
    : config_(config), scores_(scores), policy_(policy) {
  config_.Validate();
  std::set<BugId> simulated;
  for (const auto& r : test_bugs) {
    if (r.reported_at <= config_.boundary_day) {
      throw ValidationError("bug " + std::to_string(r.id.value) +
                            " is not in the test phase");
    }
    simulated.insert(r.id);
  }
  std::set<BugId> known;
  for (const auto& r : records) {
    if (r.status_final != corpus::FinalStatus::kDuplicate) known.insert(r.id);
  }
  for (const auto& r : records) {
    if (!known.contains(r.id)) continue;
    events_[r.reported_at].opens.push_back(bdg::GraphEvent::Open(r.id));
    for (const auto& e : r.dependency_events) {
      if (!known.contains(e.other)) continue;
      events_[e.day].arcs.push_back(
          e.kind == corpus::DependencyKind::kAddBlocks
              ? bdg::GraphEvent::AddArc(r.id, e.other)
              : bdg::GraphEvent::RemoveArc(r.id, e.other));
    }
    if (!simulated.contains(r.id) && r.resolved_at) {
      events_[*r.resolved_at].resolves.push_back(
          bdg::GraphEvent::Resolve(r.id));
    }
  }

  const Day horizon_days = CeilDay(config_.horizon_days);
  end_day_ = config_.boundary_day;
  for (const auto& r : test_bugs) {
    arrivals_[r.reported_at].push_back(r.id);
    end_day_ = std::max(end_day_, r.reported_at + horizon_days);
    if (r.resolved_at) end_day_ = std::max(end_day_, *r.resolved_at);
    scores_.Row(r.id);  // every simulated bug needs scores
  }
  if (config_.end_day) end_day_ = *config_.end_day;

  std::vector<corpus::BugRecord> sorted = test_bugs;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& r : sorted) {
    outcome_index_.emplace(r.id, result_.outcomes.size());
    OutcomeRecord o;
    o.bug = r.id;
    o.component = r.component;
    o.reported_at = r.reported_at;
    result_.outcomes.push_back(std::move(o));
  }

  for (DevId d : scores_.developers) {
    slates_.push_back({d, config_.horizon_days, 0.0, {}});
  }
  result_.policy = policy::PolicyName(policy_.kind());
  result_.developers = scores_.developers;
  result_.horizon_days = config_.horizon_days;
  result_.first_day = config_.boundary_day + 1;
  result_.end_day = end_day_;

  // Replay the history up to the boundary.
  for (auto it = events_.begin();
       it != events_.end() && it->first <= config_.boundary_day; ++it) {
    ApplyEvents(it->first);
  }
  today_ = config_.boundary_day + 1;
}

void Simulator::ApplyEvents(Day day) {
  auto it = events_.find(day);
  if (it == events_.end()) return;
  for (const auto* group :
       {&it->second.opens, &it->second.arcs, &it->second.resolves}) {
    for (const auto& e : *group) graph_.Apply(e);
  }
}

void Simulator::Complete(std::size_t slate, BugId bug, Day day) {
  graph_.Apply(bdg::GraphEvent::Resolve(bug));
  auto& o = result_.outcomes[outcome_index_.at(bug)];
  o.completion_day = day;
  if (policy_.kind() != policy::PolicyKind::kActual) {
    o.fixing_days = static_cast<double>(day - *o.assigned_day);
  }
  auto& list = slates_[slate].in_progress;
  list.erase(std::remove_if(list.begin(), list.end(),
                            [&](const auto& p) { return p.first == bug; }),
             list.end());
}

std::vector<BugId> Simulator::FeasibleBugs() const {
  return {pool_.begin(), pool_.end()};
}

void Simulator::StepDay() {
  if (Done()) return;
  const Day day = today_;

  // (a)
  ApplyEvents(day);
  if (auto it = arrivals_.find(day); it != arrivals_.end()) {
    for (BugId b : it->second) {
      graph_.Apply(bdg::GraphEvent::Open(b));
      pool_.insert(b);
    }
  }

  // (b)
  for (std::size_t k = 0; k < slates_.size(); ++k) {
    std::vector<BugId> due;
    for (const auto& [bug, when] : slates_[k].in_progress) {
      if (when <= day) due.push_back(bug);
    }
    std::sort(due.begin(), due.end());
    for (BugId b : due) Complete(k, b, day);
  }

  // (c)
  const std::vector<BugId> open = FeasibleBugs();
  std::vector<double> capacity;
  for (const auto& s : slates_) capacity.push_back(s.T);
  policy::PolicyInput input{day, open, &scores_, capacity, &graph_};
  policy::DailyDecision decision = policy_.Decide(input);
  decision.day = day;

  // (d)
  std::vector<double> load(slates_.size(), 0.0);
  std::map<BugId, DevId> batch;
  for (const auto& a : decision.assignments) {
    if (!pool_.contains(a.bug)) {
      throw ValidationError("policy assigned bug " +
                            std::to_string(a.bug.value) +
                            " which is not in the pool");
    }
    if (!batch.emplace(a.bug, a.dev).second) {
      throw ValidationError("policy assigned bug " +
                            std::to_string(a.bug.value) + " twice");
    }
    load[scores_.DevIndex(a.dev)] += a.estimated_cost;
  }
  if (policy_.respects_capacity()) {
    for (std::size_t k = 0; k < slates_.size(); ++k) {
      if (load[k] > slates_[k].T + kCapacitySlack) {
        throw ValidationError(
            "day " + std::to_string(day) + ": developer " +
            std::to_string(slates_[k].dev.value) + " assigned " +
            stats::FormatDouble(load[k]) + " days with only " +
            stats::FormatDouble(slates_[k].T) + " remaining");
      }
    }
  }

  const auto depths = graph_.Depths();
  auto depth_of = [&](BugId b) {
    auto it = depths.find(b);
    return it == depths.end() ? 0 : it->second;
  };
  std::vector<std::vector<const policy::DecisionItem*>> per_dev(slates_.size());
  for (const auto& a : decision.assignments) {
    auto& o = result_.outcomes[outcome_index_.at(a.bug)];
    o.dev = a.dev;
    o.assigned_day = day;
    o.estimated_cost = a.estimated_cost;
    if (graph_.Contains(a.bug)) {
      for (BugId p : graph_.BlockingParents(a.bug)) {
        auto it = batch.find(p);
        if (it == batch.end() || it->second != a.dev) {
          o.blocked = true;
          break;
        }
      }
    }
    per_dev[scores_.DevIndex(a.dev)].push_back(&a);
    pool_.erase(a.bug);
  }
  for (std::size_t k = 0; k < slates_.size(); ++k) {
    auto& slate = slates_[k];
    auto& items = per_dev[k];
    // Blockers first so a pair given to one developer is worked in order.
    std::stable_sort(items.begin(), items.end(), [&](auto* x, auto* y) {
      const int dx = depth_of(x->bug), dy = depth_of(y->bug);
      if (dx != dy) return dx < dy;
      return x->bug < y->bug;
    });
    for (const auto* a : items) {
      slate.T = std::max(0.0, slate.T - a->estimated_cost);
      auto& o = result_.outcomes[outcome_index_.at(a->bug)];
      Day done = 0;
      if (a->completion_day) {
        done = std::max(day, *a->completion_day);
        o.fixing_days = a->estimated_cost;
      } else {
        const double start = std::max<double>(day, slate.busy_until);
        slate.busy_until = start + a->estimated_cost;
        done = std::max(day + 1, CeilDay(slate.busy_until));
      }
      slate.in_progress.emplace_back(a->bug, done);
    }
  }
  for (std::size_t k = 0; k < slates_.size(); ++k) {
    std::vector<BugId> due;
    for (const auto& [bug, when] : slates_[k].in_progress) {
      if (when <= day) due.push_back(bug);
    }
    for (BugId b : due) Complete(k, b, day);
  }

  // (e)
  for (auto& s : slates_) s.T = std::min(config_.horizon_days, s.T + 1.0);

  DailySample sample;
  sample.day = day;
  sample.pool = pool_.size();
  sample.assigned = decision.assignments.size();
  for (const auto& s : slates_) {
    sample.in_progress += s.in_progress.size();
    sample.capacity.push_back(s.T);
  }
  sample.graph = graph_.Metrics();
  result_.samples.push_back(std::move(sample));
  if (!decision.assignments.empty()) {
    decision.deferred.clear();
    result_.decisions.push_back(std::move(decision));
  }
  ++today_;
}

SimulationResult Simulator::Finish() && {
  while (!Done()) StepDay();
  result_.rejected_arcs = graph_.rejected_arcs().size();
  return std::move(result_);
}

SimulationResult RunSimulation(const SimulationConfig& config,
                               const std::vector<corpus::BugRecord>& records,
                               const std::vector<corpus::BugRecord>& test_bugs,
                               const policy::ScoreTable& scores,
                               const policy::Policy& policy) {
  if (test_bugs.empty()) {
    config.Validate();
    SimulationResult r;
    r.policy = policy::PolicyName(policy.kind());
    r.developers = scores.developers;
    r.horizon_days = config.horizon_days;
    r.first_day = config.boundary_day + 1;
    r.end_day = config.boundary_day;
    return r;
  }
  return Simulator(config, records, test_bugs, scores, policy).Finish();
}

void WriteOutcomeLog(std::ostream& out, const SimulationResult& result) {
  for (const auto& o : result.outcomes) {
    nlohmann::ordered_json j;
    j["bug"] = o.bug.value;
    j["component"] = o.component;
    j["reported_at"] = o.reported_at;
    j["developer"] = o.dev ? nlohmann::ordered_json(o.dev->value) : nullptr;
    j["assigned_day"] =
        o.assigned_day ? nlohmann::ordered_json(*o.assigned_day) : nullptr;
    j["completion_day"] =
        o.completion_day ? nlohmann::ordered_json(*o.completion_day) : nullptr;
    j["estimated_cost"] = o.estimated_cost;
    j["fixing_days"] = o.fixing_days;
    j["blocked"] = o.blocked;
    out << j.dump() << '\n';
  }
}

std::vector<OutcomeRecord> ReadOutcomeLog(std::istream& in) {
  std::vector<OutcomeRecord> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      OutcomeRecord o;
      o.bug = BugId(j.at("bug").get<std::int64_t>());
      o.component = j.at("component").get<std::string>();
      o.reported_at = j.at("reported_at").get<Day>();
      if (!j.at("developer").is_null()) {
        o.dev = DevId(j.at("developer").get<std::int64_t>());
      }
      if (!j.at("assigned_day").is_null()) {
        o.assigned_day = j.at("assigned_day").get<Day>();
      }
      if (!j.at("completion_day").is_null()) {
        o.completion_day = j.at("completion_day").get<Day>();
      }
      o.estimated_cost = j.at("estimated_cost").get<double>();
      o.fixing_days = j.at("fixing_days").get<double>();
      o.blocked = j.at("blocked").get<bool>();
      out.push_back(std::move(o));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(n, e.what());
    }
  }
  return out;
}

void WriteDailyCsv(std::ostream& out, const SimulationResult& result) {
  out << "day,pool,assigned,in_progress,nodes,arcs,depth,degree";
  for (DevId d : result.developers) out << ",T_" << d.value;
  out << '\n';
  for (const auto& s : result.samples) {
    out << s.day << ',' << s.pool << ',' << s.assigned << ',' << s.in_progress
        << ',' << s.graph.nodes << ',' << s.graph.arcs << ','
        << stats::FormatDouble(s.graph.mean_depth) << ','
        << stats::FormatDouble(s.graph.mean_degree);
    for (double t : s.capacity) out << ',' << stats::FormatDouble(t);
    out << '\n';
  }
}

std::vector<DailySample> ReadDailyCsv(std::istream& in) {
  std::vector<DailySample> out;
  std::string line;
  int n = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (n == 1) {
      if (cells.size() < 8 || cells[0] != "day") {
        throw ParseError(n, "unexpected daily CSV header");
      }
      columns = cells.size();
      continue;
    }
    if (cells.size() != columns) throw ParseError(n, "wrong column count");
    try {
      DailySample s;
      s.day = std::stoi(cells[0]);
      s.pool = std::stoul(cells[1]);
      s.assigned = std::stoul(cells[2]);
      s.in_progress = std::stoul(cells[3]);
      s.graph.nodes = std::stoul(cells[4]);
      s.graph.arcs = std::stoul(cells[5]);
      s.graph.mean_depth = std::stod(cells[6]);
      s.graph.mean_degree = std::stod(cells[7]);
      for (std::size_t i = 8; i < cells.size(); ++i) {
        s.capacity.push_back(std::stod(cells[i]));
      }
      out.push_back(std::move(s));
    } catch (const std::logic_error& e) {
      throw ParseError(n, e.what());
    }
  }
  return out;
}

void WriteDecisionLog(std::ostream& out, const SimulationResult& result) {
  for (const auto& d : result.decisions) {
    for (const auto& a : d.assignments) {
      nlohmann::ordered_json j;
      j["day"] = d.day;
      j["bug"] = a.bug.value;
      j["developer"] = a.dev.value;
      j["cost"] = a.estimated_cost;
      out << j.dump() << '\n';
    }
  }
}

}  // namespace triage::sim
