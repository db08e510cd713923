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

#include "triage/policies.hpp"

#include <algorithm>
#include <set>

#include "triage/error.hpp"

namespace triage::policy {
namespace {

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

std::vector<double> CosTriageScores(const BugScores& row, double alpha) {
  const double max_s =
      *std::max_element(row.suitability.begin(), row.suitability.end());
  const double min_c = *std::min_element(row.cost.begin(), row.cost.end());
  std::vector<double> out(row.cost.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double s = max_s > 0.0 ? row.suitability[k] / max_s : 0.0;
    out[k] = alpha * s + (1.0 - alpha) * (min_c / row.cost[k]);
  }
  return out;
}

class ActualPolicy final : public Policy {
 public:
  explicit ActualPolicy(const HistoryTable* history) : history_(history) {}
  PolicyKind kind() const override { return PolicyKind::kActual; }
  bool respects_capacity() const override { return false; }
  DailyDecision Decide(const PolicyInput& in) const override {
    return DecideActual(in.day, in.open_bugs, *history_);
  }

 private:
  const HistoryTable* history_;
};

class CbrPolicy final : public Policy {
 public:
  PolicyKind kind() const override { return PolicyKind::kCbr; }
  bool respects_capacity() const override { return false; }
  DailyDecision Decide(const PolicyInput& in) const override {
    return DecideCbr(in.day, in.open_bugs, *in.scores);
  }
};

class CosTriagePolicy final : public Policy {
 public:
  explicit CosTriagePolicy(double alpha) : alpha_(alpha) {}
  PolicyKind kind() const override { return PolicyKind::kCosTriage; }
  bool respects_capacity() const override { return false; }
  DailyDecision Decide(const PolicyInput& in) const override {
    return DecideCosTriage(in.day, in.open_bugs, *in.scores, alpha_);
  }

 private:
  double alpha_;
};

class KnapsackPolicy final : public Policy {
 public:
  KnapsackPolicy(solver::Variant variant, const PolicyOptions& options)
      : variant_(variant), options_(options) {}
  PolicyKind kind() const override {
    return variant_ == solver::Variant::kDabt ? PolicyKind::kDabt
                                              : PolicyKind::kRabt;
  }
  bool respects_capacity() const override { return true; }
  DailyDecision Decide(const PolicyInput& in) const override {
    return DecideKnapsack(in.day, in.open_bugs, *in.scores, in.capacities,
                          *in.graph, options_.alpha, variant_, options_.mode);
  }

 private:
  solver::Variant variant_;
  PolicyOptions options_;
};

}  // namespace

const char* PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kActual: return "actual";
    case PolicyKind::kCbr: return "cbr";
    case PolicyKind::kCosTriage: return "costriage";
    case PolicyKind::kRabt: return "rabt";
    case PolicyKind::kDabt: return "dabt";
  }
  return "?";
}

PolicyKind ParsePolicy(const std::string& name) {
  for (PolicyKind k : AllPolicies()) {
    if (name == PolicyName(k)) return k;
  }
  throw ValidationError("unknown policy '" + name + "'");
}

std::vector<PolicyKind> AllPolicies() {
  return {PolicyKind::kActual, PolicyKind::kCbr, PolicyKind::kCosTriage,
          PolicyKind::kRabt, PolicyKind::kDabt};
}

const BugScores& ScoreTable::Row(BugId bug) const {
  auto it = rows.find(bug);
  if (it == rows.end()) {
    throw ValidationError("no scores for bug " + std::to_string(bug.value));
  }
  return it->second;
}

std::size_t ScoreTable::DevIndex(DevId dev) const {
  auto it = std::lower_bound(developers.begin(), developers.end(), dev);
  if (it == developers.end() || *it != dev) {
    throw ValidationError("unknown developer " + std::to_string(dev.value));
  }
  return static_cast<std::size_t>(it - developers.begin());
}

nlohmann::ordered_json ToJson(const DailyDecision& d) {
  nlohmann::ordered_json j;
  j["day"] = d.day;
  auto list = nlohmann::ordered_json::array();
  for (const auto& a : d.assignments) {
    list.push_back({{"bug", a.bug.value},
                    {"developer", a.dev.value},
                    {"cost", a.estimated_cost}});
  }
  j["assignments"] = std::move(list);
  auto deferred = nlohmann::ordered_json::array();
  for (BugId b : d.deferred) deferred.push_back(b.value);
  j["deferred"] = std::move(deferred);
  return j;
}

DailyDecision DecideCbr(Day day, std::span<const BugId> open_bugs,
                        const ScoreTable& scores) {
  DailyDecision out{day, {}, {}};
  for (BugId bug : open_bugs) {
    const BugScores& row = scores.Row(bug);
    const std::size_t k = ArgMax(row.suitability);
    out.assignments.push_back({bug, scores.developers[k], row.cost[k], {}});
  }
  return out;
}

DailyDecision DecideCosTriage(Day day, std::span<const BugId> open_bugs,
                              const ScoreTable& scores, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1]");
  }
  DailyDecision out{day, {}, {}};
  for (BugId bug : open_bugs) {
    const BugScores& row = scores.Row(bug);
    const std::size_t k = ArgMax(CosTriageScores(row, alpha));
    out.assignments.push_back({bug, scores.developers[k], row.cost[k], {}});
  }
  return out;
}

DailyDecision DecideActual(Day day, std::span<const BugId> open_bugs,
                           const HistoryTable& history) {
  DailyDecision out{day, {}, {}};
  for (BugId bug : open_bugs) {
    auto it = history.find(bug);
    if (it == history.end() || it->second.assigned_at != day) {
      out.deferred.push_back(bug);
      continue;
    }
    const auto& h = it->second;
    out.assignments.push_back(
        {bug, h.dev, static_cast<double>(h.resolved_at - h.assigned_at + 1),
         h.resolved_at});
  }
  return out;
}

solver::AssignmentInstance BuildInstance(std::span<const BugId> open_bugs,
                                         const ScoreTable& scores,
                                         std::span<const double> capacities,
                                         const bdg::DependencyGraph& graph,
                                         double alpha, solver::Variant variant,
                                         solver::PrecedenceMode mode) {
  if (capacities.size() != scores.developers.size()) {
    throw ValidationError("capacity vector does not match developers");
  }
  std::set<BugId> members(open_bugs.begin(), open_bugs.end());
  if (variant == solver::Variant::kDabt) {
    // Drop bugs with an open blocker that cannot be scheduled today, until
    // nothing changes.
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = members.begin(); it != members.end();) {
        bool blocked = false;
        if (graph.Contains(*it)) {
          for (BugId p : graph.BlockingParents(*it)) {
            if (!members.contains(p)) {
              blocked = true;
              break;
            }
          }
        }
        if (blocked) {
          it = members.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
  }
  solver::AssignmentInstance inst;
  inst.alpha = alpha;
  inst.mode = mode;
  for (std::size_t k = 0; k < capacities.size(); ++k) {
    inst.developers.push_back({scores.developers[k], capacities[k]});
  }
  for (BugId bug : members) {
    const BugScores& row = scores.Row(bug);
    inst.bugs.push_back({bug, row.suitability, row.cost});
    if (variant == solver::Variant::kDabt && graph.Contains(bug)) {
      for (BugId p : graph.BlockingParents(bug)) {
        inst.precedence.emplace_back(p, bug);
      }
    }
  }
  return inst;
}

DailyDecision DecideKnapsack(Day day, std::span<const BugId> open_bugs,
                             const ScoreTable& scores,
                             std::span<const double> capacities,
                             const bdg::DependencyGraph& graph, double alpha,
                             solver::Variant variant,
                             solver::PrecedenceMode mode) {
  const auto inst = BuildInstance(open_bugs, scores, capacities, graph, alpha,
                                  variant, mode);
  const auto solution = solver::Solve(inst, variant);
  DailyDecision out{day, {}, {}};
  std::map<BugId, DevId> chosen;
  for (const auto& a : solution.assignments) chosen.emplace(a.bug, a.dev);
  for (BugId bug : open_bugs) {
    auto it = chosen.find(bug);
    if (it == chosen.end()) {
      out.deferred.push_back(bug);
      continue;
    }
    const std::size_t k = scores.DevIndex(it->second);
    out.assignments.push_back({bug, it->second, scores.Row(bug).cost[k], {}});
  }
  return out;
}

std::unique_ptr<Policy> MakePolicy(PolicyKind kind,
                                   const PolicyOptions& options,
                                   const HistoryTable* history) {
  if (!(options.alpha >= 0.0 && options.alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1]");
  }
  switch (kind) {
    case PolicyKind::kActual:
      if (history == nullptr) {
        throw ValidationError("the actual policy needs assignment history");
      }
      return std::make_unique<ActualPolicy>(history);
    case PolicyKind::kCbr:
      return std::make_unique<CbrPolicy>();
    case PolicyKind::kCosTriage:
      return std::make_unique<CosTriagePolicy>(options.alpha);
    case PolicyKind::kRabt:
      return std::make_unique<KnapsackPolicy>(solver::Variant::kRabt, options);
    case PolicyKind::kDabt:
      return std::make_unique<KnapsackPolicy>(solver::Variant::kDabt, options);
  }
  throw ValidationError("unknown policy");
}

}  // namespace triage::policy
