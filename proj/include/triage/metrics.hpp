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

#ifndef TRIAGE_METRICS_HPP_
#define TRIAGE_METRICS_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "triage/corpus.hpp"
#include "triage/simulator.hpp"

namespace triage::metrics {

struct MetricsReport {
  std::string policy;
  std::size_t n_bugs = 0;
  std::size_t n_assigned = 0;
  std::size_t n_unassigned = 0;
  std::size_t n_assigned_developers = 0;
  // Bugs per developer over the developers that received at least one.
  double task_mean = 0.0;
  double task_std = 0.0;
  double mean_fixing_days = 0.0;  // completed bugs only
  double pct_overdue = 0.0;
  double pct_unfixed = 0.0;
  double accuracy_pct = 0.0;
  double pct_infeasible_assignments = 0.0;
  double mean_bdg_depth = 0.0;   // average over daily samples
  double mean_bdg_degree = 0.0;
  double final_bdg_depth = 0.0;  // last sample
  double final_bdg_degree = 0.0;

  bool operator==(const MetricsReport&) const = default;
};

// Overdue: completed more than L days after the report, or never.
// Unfixed: never completed. Both use every test bug as denominator.
// Accuracy: share of assignments whose developer fixed a bug of the same
// component during training. Infeasible: share of assignments flagged as
// blocked.
MetricsReport ComputeReport(
    const std::string& policy,
    std::span<const sim::OutcomeRecord> outcomes,
    std::span<const sim::DailySample> samples,
    std::span<const corpus::DeveloperProfile> profiles, double horizon_days);

MetricsReport ComputeReport(const sim::SimulationResult& result,
                            std::span<const corpus::DeveloperProfile> profiles);

nlohmann::ordered_json ToJson(const MetricsReport& report);
MetricsReport ReportFromJson(const nlohmann::json& j);

struct ComparisonRow {
  std::string metric;
  std::vector<double> values;  // one per report
  std::vector<bool> best;      // set only for a unique best
};

struct Comparison {
  std::vector<std::string> policies;
  std::vector<ComparisonRow> rows;
};

Comparison ComparePolicies(std::span<const MetricsReport> reports);
// metric,<policy>...; a unique best value carries a trailing '*'.
void WriteComparisonCsv(std::ostream& out, const Comparison& table);
void WriteComparisonText(std::ostream& out, const Comparison& table);

struct SweepPoint {
  double alpha = 0.0;
  double accuracy_pct = 0.0;
  double pct_overdue = 0.0;
  MetricsReport report;
};

// Runs `run` once per distinct alpha, in ascending order.
std::vector<SweepPoint> SweepAlpha(
    std::span<const double> alphas,
    const std::function<MetricsReport(double)>& run);

// alpha,accuracy_pct,pct_overdue
void WriteSweepCsv(std::ostream& out, std::span<const SweepPoint> points);

}  // namespace triage::metrics

#endif  // TRIAGE_METRICS_HPP_
