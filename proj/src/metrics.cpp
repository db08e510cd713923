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

#include "triage/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "triage/error.hpp"
#include "triage/stats.hpp"

namespace triage::metrics {
namespace {

double Percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / whole;
}

enum class Better { kLower, kHigher, kNone };

struct MetricDef {
  const char* name;
  double MetricsReport::*field;
  std::size_t MetricsReport::*count;
  Better better;
};

const std::vector<MetricDef>& Definitions() {
  static const std::vector<MetricDef> defs = {
      {"n_assigned", nullptr, &MetricsReport::n_assigned, Better::kHigher},
      {"n_unassigned", nullptr, &MetricsReport::n_unassigned, Better::kLower},
      {"n_assigned_developers", nullptr,
       &MetricsReport::n_assigned_developers, Better::kNone},
      {"task_mean", &MetricsReport::task_mean, nullptr, Better::kLower},
      {"task_std", &MetricsReport::task_std, nullptr, Better::kLower},
      {"mean_fixing_days", &MetricsReport::mean_fixing_days, nullptr,
       Better::kLower},
      {"pct_overdue", &MetricsReport::pct_overdue, nullptr, Better::kLower},
      {"pct_unfixed", &MetricsReport::pct_unfixed, nullptr, Better::kLower},
      {"accuracy_pct", &MetricsReport::accuracy_pct, nullptr, Better::kHigher},
      {"pct_infeasible_assignments",
       &MetricsReport::pct_infeasible_assignments, nullptr, Better::kLower},
      {"mean_bdg_depth", &MetricsReport::mean_bdg_depth, nullptr,
       Better::kLower},
      {"mean_bdg_degree", &MetricsReport::mean_bdg_degree, nullptr,
       Better::kLower},
  };
  return defs;
}

double Value(const MetricsReport& r, const MetricDef& d) {
  return d.field ? r.*(d.field) : static_cast<double>(r.*(d.count));
}

std::string Cell(double v, bool best) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(v == std::floor(v) ? 0 : 2) << v;
  if (best) os << '*';
  return os.str();
}

}  // namespace

MetricsReport ComputeReport(
    const std::string& policy,
    std::span<const sim::OutcomeRecord> outcomes,
    std::span<const sim::DailySample> samples,
    std::span<const corpus::DeveloperProfile> profiles, double horizon_days) {
  MetricsReport r;
  r.policy = policy;
  r.n_bugs = outcomes.size();
  std::map<DevId, const corpus::DeveloperProfile*> by_id;
  for (const auto& p : profiles) by_id.emplace(p.id, &p);

  std::map<DevId, std::size_t> per_dev;
  std::size_t overdue = 0, unfixed = 0, accurate = 0, blocked = 0;
  std::vector<double> fixing;
  for (const auto& o : outcomes) {
    if (o.dev) {
      ++r.n_assigned;
      ++per_dev[*o.dev];
      auto it = by_id.find(*o.dev);
      if (it != by_id.end() &&
          it->second->components_experienced.contains(o.component)) {
        ++accurate;
      }
      if (o.blocked) ++blocked;
    } else {
      ++r.n_unassigned;
    }
    if (!o.completion_day) {
      ++unfixed;
      ++overdue;
    } else {
      fixing.push_back(o.fixing_days);
      if (static_cast<double>(*o.completion_day - o.reported_at) >
          horizon_days) {
        ++overdue;
      }
    }
  }
  r.n_assigned_developers = per_dev.size();
  if (!per_dev.empty()) {
    std::vector<double> counts;
    for (const auto& [d, n] : per_dev) counts.push_back(static_cast<double>(n));
    r.task_mean = stats::Mean(counts);
    r.task_std = stats::PopulationStdDev(counts);
  }
  if (!fixing.empty()) r.mean_fixing_days = stats::Mean(fixing);
  r.pct_overdue = Percent(overdue, r.n_bugs);
  r.pct_unfixed = Percent(unfixed, r.n_bugs);
  r.accuracy_pct = Percent(accurate, r.n_assigned);
  r.pct_infeasible_assignments = Percent(blocked, r.n_assigned);
  if (!samples.empty()) {
    double depth = 0.0, degree = 0.0;
    for (const auto& s : samples) {
      depth += s.graph.mean_depth;
      degree += s.graph.mean_degree;
    }
    r.mean_bdg_depth = depth / samples.size();
    r.mean_bdg_degree = degree / samples.size();
    r.final_bdg_depth = samples.back().graph.mean_depth;
    r.final_bdg_degree = samples.back().graph.mean_degree;
  }
  return r;
}

MetricsReport ComputeReport(
    const sim::SimulationResult& result,
    std::span<const corpus::DeveloperProfile> profiles) {
  return ComputeReport(result.policy, result.outcomes, result.samples,
                       profiles, result.horizon_days);
}

nlohmann::ordered_json ToJson(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["policy"] = r.policy;
  j["n_bugs"] = r.n_bugs;
  j["n_assigned"] = r.n_assigned;
  j["n_unassigned"] = r.n_unassigned;
  j["n_assigned_developers"] = r.n_assigned_developers;
  j["task_mean"] = r.task_mean;
  j["task_std"] = r.task_std;
  j["mean_fixing_days"] = r.mean_fixing_days;
  j["pct_overdue"] = r.pct_overdue;
  j["pct_unfixed"] = r.pct_unfixed;
  j["accuracy_pct"] = r.accuracy_pct;
  j["pct_infeasible_assignments"] = r.pct_infeasible_assignments;
  j["mean_bdg_depth"] = r.mean_bdg_depth;
  j["mean_bdg_degree"] = r.mean_bdg_degree;
  j["final_bdg_depth"] = r.final_bdg_depth;
  j["final_bdg_degree"] = r.final_bdg_degree;
  return j;
}

MetricsReport ReportFromJson(const nlohmann::json& j) {
  MetricsReport r;
  r.policy = j.at("policy").get<std::string>();
  r.n_bugs = j.at("n_bugs").get<std::size_t>();
  r.n_assigned = j.at("n_assigned").get<std::size_t>();
  r.n_unassigned = j.at("n_unassigned").get<std::size_t>();
  r.n_assigned_developers = j.at("n_assigned_developers").get<std::size_t>();
  r.task_mean = j.at("task_mean").get<double>();
  r.task_std = j.at("task_std").get<double>();
  r.mean_fixing_days = j.at("mean_fixing_days").get<double>();
  r.pct_overdue = j.at("pct_overdue").get<double>();
  r.pct_unfixed = j.at("pct_unfixed").get<double>();
  r.accuracy_pct = j.at("accuracy_pct").get<double>();
  r.pct_infeasible_assignments =
      j.at("pct_infeasible_assignments").get<double>();
  r.mean_bdg_depth = j.at("mean_bdg_depth").get<double>();
  r.mean_bdg_degree = j.at("mean_bdg_degree").get<double>();
  r.final_bdg_depth = j.at("final_bdg_depth").get<double>();
  r.final_bdg_degree = j.at("final_bdg_degree").get<double>();
  return r;
}

Comparison ComparePolicies(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw ValidationError("no reports to compare");
  Comparison table;
  for (const auto& r : reports) table.policies.push_back(r.policy);
  for (const auto& def : Definitions()) {
    ComparisonRow row;
    row.metric = def.name;
    for (const auto& r : reports) row.values.push_back(Value(r, def));
    row.best.assign(reports.size(), false);
    if (def.better != Better::kNone && reports.size() > 1) {
      const auto it = def.better == Better::kLower
                          ? std::min_element(row.values.begin(),
                                             row.values.end())
                          : std::max_element(row.values.begin(),
                                             row.values.end());
      if (std::count(row.values.begin(), row.values.end(), *it) == 1) {
        row.best[it - row.values.begin()] = true;
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void WriteComparisonCsv(std::ostream& out, const Comparison& table) {
  out << "metric";
  for (const auto& p : table.policies) out << ',' << p;
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.metric;
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      out << ',' << stats::FormatDouble(row.values[i])
          << (row.best[i] ? "*" : "");
    }
    out << '\n';
  }
}

void WriteComparisonText(std::ostream& out, const Comparison& table) {
  std::size_t label = 6;
  for (const auto& row : table.rows) label = std::max(label, row.metric.size());
  std::vector<std::size_t> width;
  for (std::size_t i = 0; i < table.policies.size(); ++i) {
    std::size_t w = table.policies[i].size();
    for (const auto& row : table.rows) {
      w = std::max(w, Cell(row.values[i], row.best[i]).size());
    }
    width.push_back(w);
  }
  out << std::left << std::setw(static_cast<int>(label)) << "metric";
  for (std::size_t i = 0; i < width.size(); ++i) {
    out << "  " << std::right << std::setw(static_cast<int>(width[i]))
        << table.policies[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    out << std::left << std::setw(static_cast<int>(label)) << row.metric;
    for (std::size_t i = 0; i < width.size(); ++i) {
      out << "  " << std::right << std::setw(static_cast<int>(width[i]))
          << Cell(row.values[i], row.best[i]);
    }
    out << '\n';
  }
  out << std::left;
}

std::vector<SweepPoint> SweepAlpha(
    std::span<const double> alphas,
    const std::function<MetricsReport(double)>& run) {
  std::set<double> grid;
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ValidationError("alpha values must lie in [0, 1]");
    }
    grid.insert(a);
  }
  std::vector<SweepPoint> out;
  for (double a : grid) {
    MetricsReport r = run(a);
    out.push_back({a, r.accuracy_pct, r.pct_overdue, std::move(r)});
  }
  return out;
}

void WriteSweepCsv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "alpha,accuracy_pct,pct_overdue\n";
  for (const auto& p : points) {
    out << stats::FormatDouble(p.alpha) << ','
        << stats::FormatDouble(p.accuracy_pct) << ','
        << stats::FormatDouble(p.pct_overdue) << '\n';
  }
}

}  // namespace triage::metrics
