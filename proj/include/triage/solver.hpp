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

#ifndef TRIAGE_SOLVER_HPP_
#define TRIAGE_SOLVER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "triage/ids.hpp"

namespace triage::solver {

// Slack allowed when comparing summed costs with a capacity.
inline constexpr double kCapacityTolerance = 1e-9;
// Largest instance the brute-force oracle accepts.
inline constexpr std::size_t kOracleMaxBugs = 12;

enum class Variant {
  kDabt,  // suitability/cost trade-off with precedence constraints
  kRabt,  // suitability only, no precedence
};

// How a precedence arc (parent -> child) restricts an assigned child.
enum class PrecedenceMode {
  kSameDeveloper,  // the parent goes to the same developer in the same batch
  kAnyDeveloper,   // the parent is assigned to someone in the same batch
};

struct InstanceBug {
  BugId id;
  std::vector<double> suitability;  // per developer, row maximum 1
  std::vector<double> cost;         // per developer, days, > 0
};

struct InstanceDeveloper {
  DevId id;
  double capacity = 0.0;  // days available today
};

// One day's assignment problem. Columns of the suitability and cost rows
// follow the order of `developers`.
struct AssignmentInstance {
  std::vector<InstanceBug> bugs;
  std::vector<InstanceDeveloper> developers;
  std::vector<std::pair<BugId, BugId>> precedence;  // (parent, child)
  double alpha = 0.5;
  PrecedenceMode mode = PrecedenceMode::kSameDeveloper;

  // Throws ValidationError unless rows have one entry per developer, each
  // suitability row lies in [0, 1] with maximum 1, costs are positive,
  // capacities are non-negative, alpha is in [0, 1], bug ids are unique and
  // precedence arcs form a DAG over instance bugs.
  void Validate() const;
};

struct Assignment {
  BugId bug;
  DevId dev;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

struct AssignmentSolution {
  std::vector<Assignment> assignments;  // sorted by bug id
  double objective = 0.0;
  std::uint64_t node_count = 0;
};

// alpha * s / max(s) + (1 - alpha) * min(c) / c for bug row `bug` and
// developer column `dev`.
double Contribution(const AssignmentInstance& instance, std::size_t bug,
                    std::size_t dev);

// Describes the first violated constraint, or nullopt when the assignment
// set is feasible: each bug at most once, per-developer cost within
// capacity, and (DABT only) precedence per the instance mode.
std::optional<std::string> FindViolation(const AssignmentInstance& instance,
                                         std::span<const Assignment> chosen,
                                         Variant variant);

// DABT: sum of Contribution; RABT: sum of raw suitability. Throws
// ValidationError for an infeasible assignment set.
double ObjectiveValue(const AssignmentInstance& instance,
                      std::span<const Assignment> chosen,
                      Variant variant = Variant::kDabt);

// Exact depth-first branch-and-bound. Bugs are branched in a topological
// order of the precedence arcs, preferring larger best contribution and
// then smaller bug id; each bug tries developers by decreasing
// contribution (ties by smaller developer id) before leaving it
// unassigned. A node is pruned when its value plus the smaller of two
// admissible bounds cannot beat the incumbent:
//   - each open bug's best contribution over developers that still fit,
//   - the sum over developers of a fractional knapsack on the open bugs.
// Among equal objectives the first solution found in this order is kept.
AssignmentSolution SolveDabt(const AssignmentInstance& instance);

// Same search with weights s and no precedence constraints.
AssignmentSolution SolveRabt(const AssignmentInstance& instance);

AssignmentSolution Solve(const AssignmentInstance& instance, Variant variant);

// Enumerates every map bug -> {unassigned, developer}, keeping feasible
// maps only, and returns the best one. Shares no code with the search.
// Throws ValidationError above kOracleMaxBugs bugs.
AssignmentSolution BruteForceOracle(const AssignmentInstance& instance,
                                    Variant variant);

AssignmentInstance InstanceFromJson(const nlohmann::json& j);
nlohmann::ordered_json ToJson(const AssignmentInstance& instance);
nlohmann::ordered_json ToJson(const AssignmentSolution& solution);

const char* VariantName(Variant v);
Variant ParseVariant(const std::string& name);
const char* PrecedenceModeName(PrecedenceMode m);
PrecedenceMode ParsePrecedenceMode(const std::string& name);

}  // namespace triage::solver

#endif  // TRIAGE_SOLVER_HPP_
