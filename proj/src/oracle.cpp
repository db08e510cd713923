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

#include <functional>
#include <map>

#include "triage/error.hpp"
#include "triage/solver.hpp"

namespace triage::solver {

// Exhaustive enumeration. Kept deliberately naive: only capacity-infeasible
// prefixes are cut, precedence is checked on complete maps.
AssignmentSolution BruteForceOracle(const AssignmentInstance& instance,
                                    Variant variant) {
  instance.Validate();
  const std::size_t n = instance.bugs.size();
  const std::size_t d = instance.developers.size();
  if (n > kOracleMaxBugs) {
    throw ValidationError("oracle accepts at most " +
                          std::to_string(kOracleMaxBugs) + " bugs");
  }
  auto value_of = [&](std::size_t i, std::size_t k) {
    const auto& row = instance.bugs[i];
    if (variant == Variant::kRabt) return row.suitability[k];
    double max_s = 0.0, min_c = row.cost[0];
    for (std::size_t j = 0; j < d; ++j) {
      max_s = std::max(max_s, row.suitability[j]);
      min_c = std::min(min_c, row.cost[j]);
    }
    return instance.alpha * row.suitability[k] / max_s +
           (1.0 - instance.alpha) * min_c / row.cost[k];
  };
  std::map<BugId, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[instance.bugs[i].id] = i;

  std::vector<long> pick(n, -1);
  std::vector<long> best_pick(n, -1);
  std::vector<double> used(d, 0.0);
  double best = -1.0;
  std::uint64_t leaves = 0;

  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == n) {
      ++leaves;
      if (variant == Variant::kDabt) {
        for (const auto& [p, c] : instance.precedence) {
          const long pc = pick[pos[c]];
          const long pp = pick[pos[p]];
          if (pc < 0) continue;
          if (pp < 0) return;
          if (instance.mode == PrecedenceMode::kSameDeveloper && pp != pc) {
            return;
          }
        }
      }
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (pick[j] >= 0) total += value_of(j, pick[j]);
      }
      if (total > best + 1e-12) {
        best = total;
        best_pick = pick;
      }
      return;
    }
    pick[i] = -1;
    walk(i + 1);
    for (std::size_t k = 0; k < d; ++k) {
      const double c = instance.bugs[i].cost[k];
      if (used[k] + c > instance.developers[k].capacity + kCapacityTolerance) {
        continue;
      }
      used[k] += c;
      pick[i] = static_cast<long>(k);
      walk(i + 1);
      used[k] -= c;
    }
    pick[i] = -1;
  };
  walk(0);

  AssignmentSolution out;
  for (std::size_t i = 0; i < n; ++i) {
    if (best_pick[i] >= 0) {
      out.assignments.push_back(
          {instance.bugs[i].id, instance.developers[best_pick[i]].id});
    }
  }
  std::sort(out.assignments.begin(), out.assignments.end());
  out.objective = std::max(best, 0.0);
  out.node_count = leaves;
  return out;
}

}  // namespace triage::solver
