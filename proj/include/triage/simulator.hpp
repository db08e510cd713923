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

#ifndef TRIAGE_SIMULATOR_HPP_
#define TRIAGE_SIMULATOR_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "triage/bdg.hpp"
#include "triage/corpus.hpp"
#include "triage/ids.hpp"
#include "triage/policies.hpp"

namespace triage::sim {

struct SimulationConfig {
  Day boundary_day = 0;
  double horizon_days = 0.0;  // L
  // Last simulated day. Defaults to the latest of reported_at + ceil(L)
  // and the historical resolved_at over the test bugs.
  std::optional<Day> end_day;

  // Throws ValidationError for a non-positive or non-finite L.
  void Validate() const;
};

struct DeveloperSlate {
  DevId dev;
  double T = 0.0;           // remaining schedulable days, 0 <= T <= L
  double busy_until = 0.0;  // fractional day the queued work runs out
  std::vector<std::pair<BugId, Day>> in_progress;  // (bug, completion day)
};

// What happened to one test bug.
struct OutcomeRecord {
  BugId bug;
  std::string component;
  Day reported_at = 0;
  std::optional<DevId> dev;
  std::optional<Day> assigned_day;
  std::optional<Day> completion_day;  // unset: not fixed by the last day
  double estimated_cost = 0.0;
  // completion - assignment for simulated policies; the historical fixing
  // time for Actual. Only meaningful once completed.
  double fixing_days = 0.0;
  // An open blocker was not assigned to the same developer in the same
  // batch.
  bool blocked = false;
};

struct DailySample {
  Day day = 0;
  std::size_t pool = 0;
  std::size_t assigned = 0;
  std::size_t in_progress = 0;
  bdg::GraphMetrics graph;
  // Remaining capacity per developer once the day is over.
  std::vector<double> capacity;
};

struct SimulationResult {
  std::string policy;
  std::vector<DevId> developers;
  double horizon_days = 0.0;
  Day first_day = 0;
  Day end_day = 0;
  std::vector<OutcomeRecord> outcomes;  // by bug id
  std::vector<DailySample> samples;
  std::vector<policy::DailyDecision> decisions;  // days with assignments
  std::size_t rejected_arcs = 0;
};

// Day-by-day replay. Each day: (a) tracker events (opens, then arc
// changes, then historical resolutions of bugs that are not simulated) and
// newly reported test bugs join the pool; (b) due completions resolve;
// (c) the policy decides on the pool; (d) capacities drop by the chosen
// costs and work is queued per developer; (e) every T grows by 1 up to L.
class Simulator {
 public:
  // `records` is the raw corpus (graph events come from it); `test_bugs`
  // are the cleaned test-phase bugs the policy handles. Both must outlive
  // the simulator, as must `scores` and `policy`.
  Simulator(const SimulationConfig& config,
            const std::vector<corpus::BugRecord>& records,
            const std::vector<corpus::BugRecord>& test_bugs,
            const policy::ScoreTable& scores, const policy::Policy& policy);

  Day today() const { return today_; }
  bool Done() const { return today_ > end_day_; }
  // Runs the current day and moves to the next. Throws ValidationError
  // when a capacity-aware policy overruns a developer's T.
  void StepDay();

  // Open, unassigned test bugs in ascending id.
  std::vector<BugId> FeasibleBugs() const;

  const bdg::DependencyGraph& graph() const { return graph_; }
  const std::vector<DeveloperSlate>& slates() const { return slates_; }

  SimulationResult Finish() &&;

 private:
  struct DayEvents {
    std::vector<bdg::GraphEvent> opens;
    std::vector<bdg::GraphEvent> arcs;
    std::vector<bdg::GraphEvent> resolves;
  };

  void ApplyEvents(Day day);
  void Complete(std::size_t slate, BugId bug, Day day);

  SimulationConfig config_;
  const policy::ScoreTable& scores_;
  const policy::Policy& policy_;
  std::map<Day, DayEvents> events_;
  std::map<Day, std::vector<BugId>> arrivals_;
  std::map<BugId, std::size_t> outcome_index_;
  bdg::DependencyGraph graph_;
  std::vector<DeveloperSlate> slates_;
  std::set<BugId> pool_;
  Day today_ = 0;
  Day end_day_ = 0;
  SimulationResult result_;
};

SimulationResult RunSimulation(const SimulationConfig& config,
                               const std::vector<corpus::BugRecord>& records,
                               const std::vector<corpus::BugRecord>& test_bugs,
                               const policy::ScoreTable& scores,
                               const policy::Policy& policy);

// Historical assignee and dates of each test bug, for the Actual policy.
policy::HistoryTable BuildHistory(
    const std::vector<corpus::BugRecord>& test_bugs);

// One JSON object per test bug, ascending id.
void WriteOutcomeLog(std::ostream& out, const SimulationResult& result);
std::vector<OutcomeRecord> ReadOutcomeLog(std::istream& in);
// day,pool,assigned,in_progress,nodes,arcs,depth,degree,T_<dev>...
void WriteDailyCsv(std::ostream& out, const SimulationResult& result);
std::vector<DailySample> ReadDailyCsv(std::istream& in);
// One line per assignment: day, bug, developer, cost.
void WriteDecisionLog(std::ostream& out, const SimulationResult& result);

}  // namespace triage::sim

#endif  // TRIAGE_SIMULATOR_HPP_
