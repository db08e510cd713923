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

#include "triage/suitability.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "triage/error.hpp"
#include "triage/rng.hpp"

namespace triage::suitability {
namespace {

std::size_t ClassIndex(const std::vector<DevId>& classes, DevId dev) {
  auto it = std::lower_bound(classes.begin(), classes.end(), dev);
  if (it == classes.end() || *it != dev) {
    throw ValidationError("developer " + std::to_string(dev.value) +
                          " is not a class of the model");
  }
  return static_cast<std::size_t>(it - classes.begin());
}

}  // namespace

LinearModel TrainClassifier(std::span<const LabeledVector> train,
                            std::span<const DevId> classes,
                            std::size_t n_features,
                            const TrainingOptions& options) {
  if (options.C <= 0.0) throw ValidationError("C must be positive");
  if (options.epochs < 1) throw ValidationError("epochs must be >= 1");
  std::set<DevId> labels;
  for (const auto& ex : train) labels.insert(ex.label);
  if (labels.size() < 2) {
    throw ValidationError(
        "classifier needs at least two distinct developer labels");
  }
  LinearModel model;
  model.classes_.assign(classes.begin(), classes.end());
  std::sort(model.classes_.begin(), model.classes_.end());
  model.classes_.erase(
      std::unique(model.classes_.begin(), model.classes_.end()),
      model.classes_.end());
  for (DevId label : labels) ClassIndex(model.classes_, label);
  model.n_features_ = n_features;
  model.options_ = options;

  const std::size_t n = train.size();
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [idx, v] : train[i].features.entries) {
      if (idx >= n_features) throw ValidationError("feature index range");
      diag[i] += v * v;
    }
    diag[i] += 1.0;  // constant bias feature
  }

  for (std::size_t k = 0; k < model.classes_.size(); ++k) {
    const DevId positive = model.classes_[k];
    std::vector<double> w(n_features, 0.0);
    double b = 0.0;
    std::vector<double> alpha(n, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(options.seed + 0x9E3779B97F4A7C15ULL * (k + 1));
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
      rng.Shuffle(std::span<std::size_t>(order));
      for (std::size_t i : order) {
        const double y = train[i].label == positive ? 1.0 : -1.0;
        const double margin = train[i].features.Dot(w) + b;
        const double g = y * margin - 1.0;
        double pg = g;
        if (alpha[i] == 0.0) {
          pg = std::min(g, 0.0);
        } else if (alpha[i] == options.C) {
          pg = std::max(g, 0.0);
        }
        if (pg == 0.0) continue;
        const double old = alpha[i];
        alpha[i] = std::clamp(old - g / diag[i], 0.0, options.C);
        const double step = (alpha[i] - old) * y;
        for (const auto& [idx, v] : train[i].features.entries) {
          w[idx] += step * v;
        }
        b += step;
      }
    }
    model.weights_.push_back(std::move(w));
    model.bias_.push_back(b);
  }
  return model;
}

std::vector<double> LinearModel::DecisionValues(
    const text::SparseVector& x, std::span<const DevId> developers) const {
  std::vector<double> out;
  out.reserve(developers.size());
  for (DevId d : developers) {
    const std::size_t k = ClassIndex(classes_, d);
    out.push_back(x.Dot(weights_[k]) + bias_[k]);
  }
  return out;
}

DevId LinearModel::Predict(const text::SparseVector& x) const {
  const auto values = DecisionValues(x, classes_);
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return classes_[best];
}

nlohmann::ordered_json LinearModel::ToJson() const {
  nlohmann::ordered_json j;
  j["kind"] = "linear_svm_ovr";
  j["C"] = options_.C;
  j["epochs"] = options_.epochs;
  j["seed"] = options_.seed;
  j["n_features"] = n_features_;
  auto classes = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    auto weights = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < weights_[k].size(); ++i) {
      if (weights_[k][i] != 0.0) weights.push_back({i, weights_[k][i]});
    }
    classes.push_back({{"developer", classes_[k].value},
                       {"bias", bias_[k]},
                       {"weights", std::move(weights)}});
  }
  j["classes"] = std::move(classes);
  return j;
}

LinearModel LinearModel::FromJson(const nlohmann::json& j) {
  LinearModel m;
  m.options_.C = j.at("C").get<double>();
  m.options_.epochs = j.at("epochs").get<int>();
  m.options_.seed = j.at("seed").get<std::uint64_t>();
  m.n_features_ = j.at("n_features").get<std::size_t>();
  for (const auto& c : j.at("classes")) {
    m.classes_.push_back(DevId(c.at("developer").get<std::int64_t>()));
    m.bias_.push_back(c.at("bias").get<double>());
    std::vector<double> w(m.n_features_, 0.0);
    for (const auto& entry : c.at("weights")) {
      const auto idx = entry.at(0).get<std::size_t>();
      if (idx >= m.n_features_) throw ValidationError("weight index range");
      w[idx] = entry.at(1).get<double>();
    }
    m.weights_.push_back(std::move(w));
  }
  if (!std::is_sorted(m.classes_.begin(), m.classes_.end())) {
    throw ValidationError("model classes must be sorted by developer id");
  }
  return m;
}

double SuitabilityRow::Max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::vector<double> NormalizeRow(std::span<const double> raw) {
  if (raw.empty()) throw ValidationError("empty developer set");
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(raw.size(), 1.0);
  if (hi > lo) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      out[i] = (raw[i] - lo) / (hi - lo);
    }
  }
  return out;
}

SuitabilityRow PredictSuitability(const LinearModel& model, BugId bug,
                                  const text::SparseVector& x,
                                  std::span<const DevId> developers) {
  if (developers.empty()) throw ValidationError("empty developer set");
  SuitabilityRow row;
  row.bug = bug;
  row.developers.assign(developers.begin(), developers.end());
  row.values = NormalizeRow(model.DecisionValues(x, developers));
  return row;
}

}  // namespace triage::suitability
