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

#ifndef TRIAGE_SUITABILITY_HPP_
#define TRIAGE_SUITABILITY_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "triage/ids.hpp"
#include "triage/textprep.hpp"

namespace triage::suitability {

inline constexpr double kDefaultC = 1000.0;
inline constexpr int kDefaultEpochs = 50;

struct TrainingOptions {
  double C = kDefaultC;
  int epochs = kDefaultEpochs;
  std::uint64_t seed = 0;

  bool operator==(const TrainingOptions&) const = default;
};

struct LabeledVector {
  text::SparseVector features;
  DevId label;
};

// One-vs-rest linear classifier, one weight vector and bias per developer.
class LinearModel {
 public:
  const std::vector<DevId>& classes() const { return classes_; }
  std::size_t n_features() const { return n_features_; }
  const TrainingOptions& options() const { return options_; }
  std::span<const double> weights(std::size_t class_index) const {
    return weights_[class_index];
  }
  double bias(std::size_t class_index) const { return bias_[class_index]; }

  // Raw margin w_d . x + b_d for each developer, in `developers` order.
  // Throws ValidationError for a developer the model has no weights for.
  std::vector<double> DecisionValues(const text::SparseVector& x,
                                     std::span<const DevId> developers) const;

  // Developer with the largest margin; ties go to the smaller id.
  DevId Predict(const text::SparseVector& x) const;

  nlohmann::ordered_json ToJson() const;
  static LinearModel FromJson(const nlohmann::json& j);

  bool operator==(const LinearModel&) const = default;

 private:
  friend LinearModel TrainClassifier(std::span<const LabeledVector>,
                                     std::span<const DevId>, std::size_t,
                                     const TrainingOptions&);

  std::vector<DevId> classes_;  // ascending
  std::size_t n_features_ = 0;
  std::vector<std::vector<double>> weights_;
  std::vector<double> bias_;
  TrainingOptions options_;
};

// Trains a hinge-loss (L1-loss SVM) binary classifier per developer with
// dual coordinate descent for a fixed number of epochs; the visiting order
// is a seeded shuffle, so identical inputs give identical weights. The bias
// is learned as the weight of a constant feature equal to 1. `classes` is
// the developer set (every label must belong to it); it may include
// developers without positive examples. Throws ValidationError when the
// labels contain fewer than two distinct developers.
LinearModel TrainClassifier(std::span<const LabeledVector> train,
                            std::span<const DevId> classes,
                            std::size_t n_features,
                            const TrainingOptions& options);

struct SuitabilityRow {
  BugId bug;
  std::vector<DevId> developers;
  std::vector<double> values;  // aligned with developers, in [0, 1]

  double Max() const;
};

// Min-max normalized decision values; a row of equal margins becomes all
// ones. Throws ValidationError for an empty developer set.
SuitabilityRow PredictSuitability(const LinearModel& model, BugId bug,
                                  const text::SparseVector& x,
                                  std::span<const DevId> developers);

std::vector<double> NormalizeRow(std::span<const double> raw);

}  // namespace triage::suitability

#endif  // TRIAGE_SUITABILITY_HPP_
