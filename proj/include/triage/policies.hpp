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

#ifndef TRIAGE_POLICIES_HPP_
#define TRIAGE_POLICIES_HPP_

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "triage/bdg.hpp"
#include "triage/ids.hpp"
#include "triage/solver.hpp"

namespace triage::policy {

enum class PolicyKind { kActual, kCbr, kCosTriage, kRabt, kDabt };

const char* PolicyName(PolicyKind kind);
// Accepts actual, cbr, costriage, rabt, dabt.
PolicyKind ParsePolicy(const std::string& name);
std::vector<PolicyKind> AllPolicies();

// Per-bug model outputs; columns follow ScoreTable::developers.
struct BugScores {
  std::vector<double> suitability;  // row maximum 1
  std::vector<double> cost;         // days, > 0
  int topic = -1;
};

struct ScoreTable {
  std::vector<DevId> developers;  // ascending
  std::map<BugId, BugScores> rows;

  // Throws ValidationError for a bug without scores.
  const BugScores& Row(BugId bug) const;
  std::size_t DevIndex(DevId dev) const;
};

struct HistoricalAssignment {
  DevId dev;
  Day assigned_at = 0;
  Day resolved_at = 0;
};

using HistoryTable = std::map<BugId, HistoricalAssignment>;

struct DecisionItem {
  BugId bug;
  DevId dev;
  double estimated_cost = 0.0;
  // Set by the Actual policy only: the historical resolution day.
  std::optional<Day> completion_day;

  bool operator==(const DecisionItem&) const = default;
};

struct DailyDecision {
  Day day = 0;
  std::vector<DecisionItem> assignments;
  std::vector<BugId> deferred;

  bool operator==(const DailyDecision&) const = default;
};

nlohmann::ordered_json ToJson(const DailyDecision& decision);

// Every open bug goes to its most suitable developer (smallest id on ties).
DailyDecision DecideCbr(Day day, std::span<const BugId> open_bugs,
                        const ScoreTable& scores);

// Every open bug goes to the developer maximizing
// alpha * s / max(s) + (1 - alpha) * min(c) / c.
DailyDecision DecideCosTriage(Day day, std::span<const BugId> open_bugs,
                              const ScoreTable& scores, double alpha);

// Bugs historically assigned today go to their historical assignee; the
// others wait. Cost and completion are the historical ones.
DailyDecision DecideActual(Day day, std::span<const BugId> open_bugs,
                           const HistoryTable& history);

// Builds today's assignment instance and solves it exactly. For DABT the
// instance keeps the arcs among its bugs and leaves out, transitively,
// bugs that have an open blocker outside the instance. Unassigned bugs are
// deferred.
DailyDecision DecideKnapsack(Day day, std::span<const BugId> open_bugs,
                             const ScoreTable& scores,
                             std::span<const double> capacities,
                             const bdg::DependencyGraph& graph, double alpha,
                             solver::Variant variant,
                             solver::PrecedenceMode mode);

// The instance DecideKnapsack would solve.
solver::AssignmentInstance BuildInstance(std::span<const BugId> open_bugs,
                                         const ScoreTable& scores,
                                         std::span<const double> capacities,
                                         const bdg::DependencyGraph& graph,
                                         double alpha, solver::Variant variant,
                                         solver::PrecedenceMode mode);

struct PolicyInput {
  Day day = 0;
  std::span<const BugId> open_bugs;  // ascending id
  const ScoreTable* scores = nullptr;
  std::span<const double> capacities;  // aligned with scores->developers
  const bdg::DependencyGraph* graph = nullptr;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyKind kind() const = 0;
  // Capacity-aware policies must never exceed a developer's remaining T.
  virtual bool respects_capacity() const = 0;
  virtual DailyDecision Decide(const PolicyInput& input) const = 0;
};

struct PolicyOptions {
  double alpha = 0.5;
  solver::PrecedenceMode mode = solver::PrecedenceMode::kSameDeveloper;
};

// `history` is required for kActual and must outlive the policy.
std::unique_ptr<Policy> MakePolicy(PolicyKind kind,
                                   const PolicyOptions& options,
                                   const HistoryTable* history = nullptr);

}  // namespace triage::policy

#endif  // TRIAGE_POLICIES_HPP_
