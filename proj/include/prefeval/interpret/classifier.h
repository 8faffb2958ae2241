// Copyright 2026 The Prefeval Authors.
//
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

#ifndef PREFEVAL_INTERPRET_CLASSIFIER_H_
#define PREFEVAL_INTERPRET_CLASSIFIER_H_

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "prefeval/core/types.h"
#include "prefeval/interpret/features.h"

namespace prefeval::interpret {

struct ClassifierOptions {
  // Ridge penalty on the axis weights (not the intercept).
  double l2 = 1e-2;
  int max_iterations = 100;
  double tolerance = 1e-10;

  friend bool operator==(const ClassifierOptions&,
                         const ClassifierOptions&) = default;
};

// P(label = 1 | x) = sigmoid(intercept + sum_k weight_k * x_k).
class PreferenceModel {
 public:
  PreferenceModel() = default;
  PreferenceModel(double intercept, std::array<double, kNumAxes> weights,
                  std::set<LanguageCode> training_languages,
                  ClassifierOptions options, std::uint64_t seed);

  double Predict(std::uint8_t bits) const { return table_[bits & 63]; }
  // Predictions for all 64 inputs, indexed by bits.
  const std::array<double, kNumCells>& table() const { return table_; }

  double intercept() const { return intercept_; }
  const std::array<double, kNumAxes>& weights() const { return weights_; }
  const std::set<LanguageCode>& training_languages() const {
    return training_languages_;
  }
  const ClassifierOptions& options() const { return options_; }
  std::uint64_t seed() const { return seed_; }

  nlohmann::ordered_json ToJson() const;
  static absl::StatusOr<PreferenceModel> FromJson(
      const nlohmann::ordered_json& json);

  friend bool operator==(const PreferenceModel&, const PreferenceModel&) = default;

 private:
  double intercept_ = 0.0;
  std::array<double, kNumAxes> weights_{};
  std::set<LanguageCode> training_languages_;
  ClassifierOptions options_;
  std::uint64_t seed_ = 0;
  std::array<double, kNumCells> table_{};
};

// Fits the ridge-penalized logistic model by Newton's method on the 64-cell
// weighted label counts of the rows whose language is in
// `training_languages` (all rows when the set is empty). The fit is a
// deterministic function of the counts; `seed` is recorded only.
absl::StatusOr<PreferenceModel> TrainPreferenceClassifier(
    std::span<const FeatureRow> rows,
    const std::set<LanguageCode>& training_languages,
    const ClassifierOptions& options = {}, std::uint64_t seed = 0);

struct LanguageAccuracy {
  double accuracy = 0.0;
  double n = 0.0;
};

struct CrossLingualReport {
  double pooled_accuracy = 0.0;
  double n = 0.0;
  std::map<LanguageCode, LanguageAccuracy> per_language;
};

// Accuracy of (prediction >= 0.5) == label on the rows of the holdout
// languages. Fails with language_leakage when a holdout language was used
// for training and empty_holdout when nothing is left to score.
absl::StatusOr<CrossLingualReport> EvaluateCrossLingual(
    const PreferenceModel& model, std::span<const FeatureRow> rows,
    const std::set<LanguageCode>& holdout_languages);

nlohmann::ordered_json CrossLingualToJson(const CrossLingualReport& report);

}  // namespace prefeval::interpret

#endif  // PREFEVAL_INTERPRET_CLASSIFIER_H_
