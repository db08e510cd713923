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

#ifndef TRIAGE_STATS_HPP_
#define TRIAGE_STATS_HPP_

#include <span>
#include <string>
#include <vector>

namespace triage::stats {

// Sample quantile with linear interpolation between order statistics:
// for sorted x[0..n-1], h = (n - 1) * p and
// Q(p) = x[floor(h)] + (h - floor(h)) * (x[floor(h) + 1] - x[floor(h)]).
// Throws ValidationError on an empty sample or p outside [0, 1].
double Quantile(std::span<const double> sample, double p);

struct Quartiles {
  double q1 = 0.0;
  double q3 = 0.0;
  double Iqr() const { return q3 - q1; }
  // Tukey's upper fence, Q3 + 1.5 * IQR.
  double UpperFence() const { return q3 + 1.5 * Iqr(); }
};

Quartiles ComputeQuartiles(std::span<const double> sample);

double Mean(std::span<const double> values);
// Population standard deviation; 0 for fewer than two values.
double PopulationStdDev(std::span<const double> values);

// Shortest round-trip decimal representation, stable across runs.
std::string FormatDouble(double value);

}  // namespace triage::stats

#endif  // TRIAGE_STATS_HPP_
