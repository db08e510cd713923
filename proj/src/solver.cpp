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

#include "triage/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "triage/error.hpp"

namespace triage::solver {
namespace {

constexpr double kImprovementEps = 1e-12;
constexpr int kUndecided = -2;
constexpr int kUnassigned = -1;

std::map<BugId, std::size_t> BugIndex(const AssignmentInstance& instance) {
  std::map<BugId, std::size_t> index;
  for (std::size_t i = 0; i < instance.bugs.size(); ++i) {
    index.emplace(instance.bugs[i].id, i);
  }
  return index;
}

// Parent lists as row indices.
std::vector<std::vector<std::size_t>> ParentLists(
    const AssignmentInstance& instance) {
  const auto index = BugIndex(instance);
  std::vector<std::vector<std::size_t>> parents(instance.bugs.size());
  for (const auto& [p, c] : instance.precedence) {
    parents[index.at(c)].push_back(index.at(p));
  }
  for (auto& list : parents) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return parents;
}

// Dense search problem: weight and cost per (bug, developer) cell.
struct Problem {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> weight;
  std::vector<double> cost;
  std::vector<double> capacity;
  std::vector<std::vector<std::size_t>> parents;
  PrecedenceMode mode = PrecedenceMode::kSameDeveloper;
  std::vector<BugId> bug_ids;
  std::vector<DevId> dev_ids;

  double w(std::size_t i, std::size_t k) const { return weight[i * d + k]; }
  double c(std::size_t i, std::size_t k) const { return cost[i * d + k]; }
};

class BranchAndBound {
 public:
  explicit BranchAndBound(const Problem& p)
      : p_(p),
        choice_(p.n, kUndecided),
        best_choice_(p.n, kUnassigned),
        remaining_(p.capacity) {
    BuildOrder();
    BuildDeveloperLists();
  }

  std::vector<int> Run(std::uint64_t* nodes) {
    Search(0, 0.0);
    *nodes = nodes_;
    return best_choice_;
  }

 private:
  double BestWeight(std::size_t i) const {
    double best = 0.0;
    for (std::size_t k = 0; k < p_.d; ++k) {
      if (p_.c(i, k) <= p_.capacity[k] + kCapacityTolerance) {
        best = std::max(best, p_.w(i, k));
      }
    }
    return best;
  }

  // Topological order; among ready bugs take the largest best weight, then
  // the smallest id.
  void BuildOrder() {
    std::vector<double> best(p_.n);
    for (std::size_t i = 0; i < p_.n; ++i) best[i] = BestWeight(i);
    std::vector<std::vector<std::size_t>> children(p_.n);
    std::vector<std::size_t> indegree(p_.n, 0);
    for (std::size_t i = 0; i < p_.n; ++i) {
      indegree[i] = p_.parents[i].size();
      for (std::size_t par : p_.parents[i]) children[par].push_back(i);
    }
    auto worse = [&](std::size_t a, std::size_t b) {
      if (best[a] != best[b]) return best[a] < best[b];
      return p_.bug_ids[a] > p_.bug_ids[b];
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)>
        ready(worse);
    for (std::size_t i = 0; i < p_.n; ++i) {
      if (indegree[i] == 0) ready.push(i);
    }
    while (!ready.empty()) {
      const std::size_t i = ready.top();
      ready.pop();
      order_.push_back(i);
      for (std::size_t ch : children[i]) {
        if (--indegree[ch] == 0) ready.push(ch);
      }
    }
    // Developer preference per bug: larger weight, then smaller id.
    options_.resize(p_.n);
    for (std::size_t i = 0; i < p_.n; ++i) {
      for (std::size_t k = 0; k < p_.d; ++k) {
        if (p_.c(i, k) <= p_.capacity[k] + kCapacityTolerance) {
          options_[i].push_back(k);
        }
      }
      std::stable_sort(options_[i].begin(), options_[i].end(),
                       [&](std::size_t a, std::size_t b) {
                         if (p_.w(i, a) != p_.w(i, b)) {
                           return p_.w(i, a) > p_.w(i, b);
                         }
                         return p_.dev_ids[a] < p_.dev_ids[b];
                       });
    }
  }

  // Bugs per developer sorted by weight/cost ratio for the fractional bound.
  void BuildDeveloperLists() {
    by_ratio_.resize(p_.d);
    for (std::size_t k = 0; k < p_.d; ++k) {
      for (std::size_t i = 0; i < p_.n; ++i) {
        if (p_.w(i, k) > 0.0 &&
            p_.c(i, k) <= p_.capacity[k] + kCapacityTolerance) {
          by_ratio_[k].push_back(i);
        }
      }
      std::stable_sort(by_ratio_[k].begin(), by_ratio_[k].end(),
                       [&](std::size_t a, std::size_t b) {
                         return p_.w(a, k) / p_.c(a, k) >
                                p_.w(b, k) / p_.c(b, k);
                       });
    }
  }

  // Whether open bug i could still go to developer k given decided parents.
  bool Allowed(std::size_t i, std::size_t k) const {
    for (std::size_t par : p_.parents[i]) {
      const int c = choice_[par];
      if (c == kUndecided) continue;
      if (c == kUnassigned) return false;
      if (p_.mode == PrecedenceMode::kSameDeveloper &&
          c != static_cast<int>(k)) {
        return false;
      }
    }
    return p_.c(i, k) <= remaining_[k] + kCapacityTolerance;
  }

  double Bound(std::size_t pos) const {
    double per_bug = 0.0;
    for (std::size_t q = pos; q < order_.size(); ++q) {
      const std::size_t i = order_[q];
      double best = 0.0;
      for (std::size_t k : options_[i]) {
        if (p_.w(i, k) <= best) break;
        if (Allowed(i, k)) best = p_.w(i, k);
      }
      per_bug += best;
    }
    double knapsack = 0.0;
    for (std::size_t k = 0; k < p_.d; ++k) {
      double room = remaining_[k];
      for (std::size_t i : by_ratio_[k]) {
        if (room <= 0.0) break;
        if (choice_[i] != kUndecided || !Allowed(i, k)) continue;
        const double c = p_.c(i, k);
        if (c <= room) {
          knapsack += p_.w(i, k);
          room -= c;
        } else {
          knapsack += p_.w(i, k) * room / c;
          room = 0.0;
        }
      }
      if (knapsack >= per_bug) break;
    }
    return std::min(per_bug, knapsack);
  }

  void Search(std::size_t pos, double value) {
    ++nodes_;
    if (pos == order_.size()) {
      if (value > best_value_ + kImprovementEps) {
        best_value_ = value;
        for (std::size_t i = 0; i < p_.n; ++i) {
          best_choice_[i] = choice_[i] == kUndecided ? kUnassigned : choice_[i];
        }
      }
      return;
    }
    if (value + Bound(pos) <= best_value_ + kImprovementEps) return;
    const std::size_t i = order_[pos];
    for (std::size_t k : options_[i]) {
      if (!Allowed(i, k)) continue;
      choice_[i] = static_cast<int>(k);
      remaining_[k] -= p_.c(i, k);
      Search(pos + 1, value + p_.w(i, k));
      remaining_[k] += p_.c(i, k);
    }
    choice_[i] = kUnassigned;
    Search(pos + 1, value);
    choice_[i] = kUndecided;
  }

  const Problem& p_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> options_;
  std::vector<std::vector<std::size_t>> by_ratio_;
  std::vector<int> choice_;
  std::vector<int> best_choice_;
  std::vector<double> remaining_;
  double best_value_ = 0.0;
  std::uint64_t nodes_ = 0;
};

Problem MakeProblem(const AssignmentInstance& instance, Variant variant) {
  Problem p;
  p.n = instance.bugs.size();
  p.d = instance.developers.size();
  p.mode = instance.mode;
  p.weight.resize(p.n * p.d);
  p.cost.resize(p.n * p.d);
  for (std::size_t i = 0; i < p.n; ++i) {
    p.bug_ids.push_back(instance.bugs[i].id);
    for (std::size_t k = 0; k < p.d; ++k) {
      p.weight[i * p.d + k] = variant == Variant::kDabt
                                  ? Contribution(instance, i, k)
                                  : instance.bugs[i].suitability[k];
      p.cost[i * p.d + k] = instance.bugs[i].cost[k];
    }
  }
  for (const auto& dev : instance.developers) {
    p.capacity.push_back(dev.capacity);
    p.dev_ids.push_back(dev.id);
  }
  p.parents = variant == Variant::kDabt
                  ? ParentLists(instance)
                  : std::vector<std::vector<std::size_t>>(p.n);
  return p;
}

}  // namespace

void AssignmentInstance::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1]");
  }
  const std::size_t D = developers.size();
  std::set<DevId> dev_ids;
  for (const auto& dev : developers) {
    if (!dev_ids.insert(dev.id).second) {
      throw ValidationError("duplicate developer id");
    }
    if (!(dev.capacity >= 0.0) || !std::isfinite(dev.capacity)) {
      throw ValidationError("developer capacity must be finite and >= 0");
    }
  }
  std::set<BugId> bug_ids;
  for (const auto& bug : bugs) {
    const std::string where = "bug " + std::to_string(bug.id.value) + ": ";
    if (!bug_ids.insert(bug.id).second) {
      throw ValidationError(where + "duplicate bug id");
    }
    if (bug.suitability.size() != D || bug.cost.size() != D) {
      throw ValidationError(where + "row length differs from developer count");
    }
    double max_s = 0.0;
    for (double s : bug.suitability) {
      if (!(s >= 0.0 && s <= 1.0)) {
        throw ValidationError(where + "suitability outside [0, 1]");
      }
      max_s = std::max(max_s, s);
    }
    if (D > 0 && std::abs(max_s - 1.0) > 1e-12) {
      throw ValidationError(where + "suitability row maximum is not 1");
    }
    for (double c : bug.cost) {
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw ValidationError(where + "costs must be finite and positive");
      }
    }
  }
  std::map<BugId, std::vector<BugId>> children;
  std::map<BugId, std::size_t> indegree;
  for (BugId id : bug_ids) indegree[id] = 0;
  for (const auto& [p, c] : precedence) {
    if (!bug_ids.contains(p) || !bug_ids.contains(c)) {
      throw ValidationError("precedence arc references a bug outside the "
                            "instance");
    }
    children[p].push_back(c);
    ++indegree[c];
  }
  std::vector<BugId> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push_back(id);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const BugId cur = ready.back();
    ready.pop_back();
    ++seen;
    for (BugId ch : children[cur]) {
      if (--indegree[ch] == 0) ready.push_back(ch);
    }
  }
  if (seen != bug_ids.size()) {
    throw ValidationError("precedence arcs contain a cycle");
  }
}

double Contribution(const AssignmentInstance& instance, std::size_t bug,
                    std::size_t dev) {
  const auto& row = instance.bugs[bug];
  const double max_s = *std::max_element(row.suitability.begin(),
                                         row.suitability.end());
  const double min_c = *std::min_element(row.cost.begin(), row.cost.end());
  const double a = instance.alpha;
  const double s_term = max_s > 0.0 ? row.suitability[dev] / max_s : 0.0;
  return a * s_term + (1.0 - a) * (min_c / row.cost[dev]);
}

std::optional<std::string> FindViolation(const AssignmentInstance& instance,
                                         std::span<const Assignment> chosen,
                                         Variant variant) {
  const auto index = BugIndex(instance);
  std::map<DevId, std::size_t> dev_index;
  for (std::size_t k = 0; k < instance.developers.size(); ++k) {
    dev_index.emplace(instance.developers[k].id, k);
  }
  std::map<BugId, DevId> assigned;
  std::vector<double> load(instance.developers.size(), 0.0);
  for (const auto& a : chosen) {
    auto bi = index.find(a.bug);
    auto di = dev_index.find(a.dev);
    if (bi == index.end()) return "unknown bug " + std::to_string(a.bug.value);
    if (di == dev_index.end()) {
      return "unknown developer " + std::to_string(a.dev.value);
    }
    if (!assigned.emplace(a.bug, a.dev).second) {
      return "bug " + std::to_string(a.bug.value) + " assigned twice";
    }
    load[di->second] += instance.bugs[bi->second].cost[di->second];
  }
  for (std::size_t k = 0; k < load.size(); ++k) {
    if (load[k] > instance.developers[k].capacity + kCapacityTolerance) {
      return "developer " + std::to_string(instance.developers[k].id.value) +
             " over capacity";
    }
  }
  if (variant == Variant::kDabt) {
    for (const auto& [p, c] : instance.precedence) {
      auto child = assigned.find(c);
      if (child == assigned.end()) continue;
      auto parent = assigned.find(p);
      const bool ok =
          parent != assigned.end() &&
          (instance.mode == PrecedenceMode::kAnyDeveloper ||
           parent->second == child->second);
      if (!ok) {
        return "bug " + std::to_string(c.value) + " assigned without its "
               "blocking bug " + std::to_string(p.value);
      }
    }
  }
  return std::nullopt;
}

double ObjectiveValue(const AssignmentInstance& instance,
                      std::span<const Assignment> chosen, Variant variant) {
  if (auto violation = FindViolation(instance, chosen, variant)) {
    throw ValidationError("infeasible assignment: " + *violation);
  }
  const auto index = BugIndex(instance);
  std::vector<Assignment> sorted(chosen.begin(), chosen.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (const auto& a : sorted) {
    const std::size_t i = index.at(a.bug);
    std::size_t k = 0;
    while (instance.developers[k].id != a.dev) ++k;
    total += variant == Variant::kDabt ? Contribution(instance, i, k)
                                       : instance.bugs[i].suitability[k];
  }
  return total;
}

AssignmentSolution Solve(const AssignmentInstance& instance, Variant variant) {
  instance.Validate();
  const Problem problem = MakeProblem(instance, variant);
  BranchAndBound search(problem);
  AssignmentSolution solution;
  const auto choice = search.Run(&solution.node_count);
  for (std::size_t i = 0; i < choice.size(); ++i) {
    if (choice[i] >= 0) {
      solution.assignments.push_back(
          {problem.bug_ids[i], problem.dev_ids[choice[i]]});
    }
  }
  std::sort(solution.assignments.begin(), solution.assignments.end());
  solution.objective = ObjectiveValue(instance, solution.assignments, variant);
  return solution;
}

AssignmentSolution SolveDabt(const AssignmentInstance& instance) {
  return Solve(instance, Variant::kDabt);
}

AssignmentSolution SolveRabt(const AssignmentInstance& instance) {
  return Solve(instance, Variant::kRabt);
}

const char* VariantName(Variant v) {
  return v == Variant::kDabt ? "dabt" : "rabt";
}

Variant ParseVariant(const std::string& name) {
  if (name == "dabt") return Variant::kDabt;
  if (name == "rabt") return Variant::kRabt;
  throw ValidationError("unknown solver variant '" + name + "'");
}

const char* PrecedenceModeName(PrecedenceMode m) {
  return m == PrecedenceMode::kSameDeveloper ? "same_developer"
                                             : "any_developer";
}

PrecedenceMode ParsePrecedenceMode(const std::string& name) {
  if (name == "same_developer") return PrecedenceMode::kSameDeveloper;
  if (name == "any_developer") return PrecedenceMode::kAnyDeveloper;
  throw ValidationError("unknown precedence mode '" + name + "'");
}

AssignmentInstance InstanceFromJson(const nlohmann::json& j) {
  AssignmentInstance inst;
  inst.alpha = j.value("alpha", 0.5);
  if (j.contains("precedence_mode")) {
    inst.mode = ParsePrecedenceMode(j.at("precedence_mode").get<std::string>());
  }
  for (const auto& d : j.at("developers")) {
    inst.developers.push_back({DevId(d.at("id").get<std::int64_t>()),
                               d.at("capacity").get<double>()});
  }
  for (const auto& b : j.at("bugs")) {
    inst.bugs.push_back({BugId(b.at("id").get<std::int64_t>()),
                         b.at("suitability").get<std::vector<double>>(),
                         b.at("cost").get<std::vector<double>>()});
  }
  if (j.contains("precedence")) {
    for (const auto& arc : j.at("precedence")) {
      inst.precedence.emplace_back(BugId(arc.at(0).get<std::int64_t>()),
                                   BugId(arc.at(1).get<std::int64_t>()));
    }
  }
  return inst;
}

nlohmann::ordered_json ToJson(const AssignmentInstance& inst) {
  nlohmann::ordered_json j;
  j["alpha"] = inst.alpha;
  j["precedence_mode"] = PrecedenceModeName(inst.mode);
  auto devs = nlohmann::ordered_json::array();
  for (const auto& d : inst.developers) {
    devs.push_back({{"id", d.id.value}, {"capacity", d.capacity}});
  }
  j["developers"] = std::move(devs);
  auto bugs = nlohmann::ordered_json::array();
  for (const auto& b : inst.bugs) {
    bugs.push_back({{"id", b.id.value},
                    {"suitability", b.suitability},
                    {"cost", b.cost}});
  }
  j["bugs"] = std::move(bugs);
  auto arcs = nlohmann::ordered_json::array();
  for (const auto& [p, c] : inst.precedence) arcs.push_back({p.value, c.value});
  j["precedence"] = std::move(arcs);
  return j;
}

nlohmann::ordered_json ToJson(const AssignmentSolution& sol) {
  nlohmann::ordered_json j;
  auto list = nlohmann::ordered_json::array();
  for (const auto& a : sol.assignments) {
    list.push_back({{"bug", a.bug.value}, {"developer", a.dev.value}});
  }
  j["assignments"] = std::move(list);
  j["objective"] = sol.objective;
  j["nodes"] = sol.node_count;
  return j;
}

}  // namespace triage::solver
