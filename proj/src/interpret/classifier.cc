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

#include "prefeval/interpret/classifier.h"

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "absl/strings/str_cat.h"
#include "prefeval/core/errors.h"

namespace prefeval::interpret {
namespace {

double Sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                : std::exp(z) / (1.0 + std::exp(z));
}

// Design row for a cell: intercept then the six bits.
Eigen::Matrix<double, kNumAxes + 1, 1> Design(int cell) {
  Eigen::Matrix<double, kNumAxes + 1, 1> x;
  x(0) = 1.0;
  for (int k = 0; k < kNumAxes; ++k) x(k + 1) = (cell >> k) & 1;
  return x;
}

}  // namespace

PreferenceModel::PreferenceModel(double intercept,
                                 std::array<double, kNumAxes> weights,
                                 std::set<LanguageCode> training_languages,
                                 ClassifierOptions options, std::uint64_t seed)
    : intercept_(intercept),
      weights_(weights),
      training_languages_(std::move(training_languages)),
      options_(options),
      seed_(seed) {
  for (int cell = 0; cell < kNumCells; ++cell) {
    double z = intercept_;
    for (int k = 0; k < kNumAxes; ++k) {
      if ((cell >> k) & 1) z += weights_[k];
    }
    table_[cell] = Sigmoid(z);
  }
}

nlohmann::ordered_json PreferenceModel::ToJson() const {
  nlohmann::ordered_json json;
  json["model"] = "additive_logistic";
  json["intercept"] = intercept_;
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (int k = 0; k < kNumAxes; ++k) {
    weights[std::string(ToString(kAllAxes[k]))] = weights_[k];
  }
  json["weights"] = std::move(weights);
  nlohmann::ordered_json languages = nlohmann::ordered_json::array();
  for (const LanguageCode& language : training_languages_) {
    languages.push_back(language.code());
  }
  json["training_languages"] = std::move(languages);
  json["hyperparameters"] = {{"l2", options_.l2},
                             {"max_iterations", options_.max_iterations},
                             {"tolerance", options_.tolerance},
                             {"seed", seed_}};
  return json;
}

absl::StatusOr<PreferenceModel> PreferenceModel::FromJson(
    const nlohmann::ordered_json& json) {
  try {
    if (json.at("model").get<std::string>() != "additive_logistic") {
      return InvalidError(errc::kParseError, "unknown model type");
    }
    std::array<double, kNumAxes> weights{};
    for (int k = 0; k < kNumAxes; ++k) {
      weights[k] =
          json.at("weights").at(std::string(ToString(kAllAxes[k]))).get<double>();
    }
    std::set<LanguageCode> languages;
    for (const auto& code : json.at("training_languages")) {
      auto language = LanguageCode::Parse(code.get<std::string>());
      if (!language.ok()) return language.status();
      languages.insert(*language);
    }
    const auto& h = json.at("hyperparameters");
    ClassifierOptions options;
    options.l2 = h.at("l2").get<double>();
    options.max_iterations = h.at("max_iterations").get<int>();
    options.tolerance = h.at("tolerance").get<double>();
    return PreferenceModel(json.at("intercept").get<double>(), weights,
                           std::move(languages), options,
                           h.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    return InvalidError(errc::kParseError,
                        absl::StrCat("invalid model document: ", e.what()));
  }
}

absl::StatusOr<PreferenceModel> TrainPreferenceClassifier(
    std::span<const FeatureRow> rows,
    const std::set<LanguageCode>& training_languages,
    const ClassifierOptions& options, std::uint64_t seed) {
  std::array<double, kNumCells> positive{};
  std::array<double, kNumCells> negative{};
  std::set<LanguageCode> used;
  for (const FeatureRow& row : rows) {
    if (!training_languages.empty() &&
        !training_languages.contains(row.language)) {
      continue;
    }
    used.insert(row.language);
    (row.label ? positive : negative)[row.bits & 63] += row.weight;
  }
  double total_pos = 0.0;
  double total_neg = 0.0;
  for (int c = 0; c < kNumCells; ++c) {
    total_pos += positive[c];
    total_neg += negative[c];
  }
  if (total_pos <= 0.0 || total_neg <= 0.0) {
    return InvalidError(errc::kSingleClass,
                        "single-class training set: both labels are required");
  }

  constexpr int kDim = kNumAxes + 1;
  using Vec = Eigen::Matrix<double, kDim, 1>;
  using Mat = Eigen::Matrix<double, kDim, kDim>;
  Mat penalty = Mat::Identity() * options.l2;
  penalty(0, 0) = 0.0;

  auto objective = [&](const Vec& beta) {
    double loss = 0.5 * beta.dot(penalty * beta);
    for (int c = 0; c < kNumCells; ++c) {
      const double z = Design(c).dot(beta);
      // -log sigmoid(z) = log(1 + e^-z)
      if (positive[c] > 0) loss += positive[c] * std::log1p(std::exp(-z));
      if (negative[c] > 0) loss += negative[c] * std::log1p(std::exp(z));
    }
    return loss;
  };

  Vec beta = Vec::Zero();
  beta(0) = std::log(total_pos / total_neg);
  double loss = objective(beta);
  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    Vec gradient = penalty * beta;
    Mat hessian = penalty;
    for (int c = 0; c < kNumCells; ++c) {
      const double n = positive[c] + negative[c];
      if (n <= 0) continue;
      const auto x = Design(c);
      const double p = Sigmoid(x.dot(beta));
      gradient += (n * p - positive[c]) * x;
      hessian += n * p * (1.0 - p) * x * x.transpose();
    }
    // Bits never observed leave their column of the Hessian at the ridge
    // value; a tiny jitter keeps the solve well-posed when l2 is zero.
    hessian.diagonal().array() += 1e-12;
    const Vec step = hessian.ldlt().solve(gradient);
    double scale = 1.0;
    Vec next = beta - step;
    double next_loss = objective(next);
    while (next_loss > loss && scale > 1e-8) {
      scale *= 0.5;
      next = beta - scale * step;
      next_loss = objective(next);
    }
    const double change = (next - beta).cwiseAbs().maxCoeff();
    beta = next;
    loss = next_loss;
    if (change < options.tolerance) break;
  }

  std::array<double, kNumAxes> weights{};
  for (int k = 0; k < kNumAxes; ++k) weights[k] = beta(k + 1);
  return PreferenceModel(beta(0), weights,
                         training_languages.empty() ? used : training_languages,
                         options, seed);
}

absl::StatusOr<CrossLingualReport> EvaluateCrossLingual(
    const PreferenceModel& model, std::span<const FeatureRow> rows,
    const std::set<LanguageCode>& holdout_languages) {
  if (holdout_languages.empty()) {
    return InvalidError(errc::kEmptyHoldout, "empty holdout: no languages given");
  }
  for (const LanguageCode& language : holdout_languages) {
    if (model.training_languages().contains(language)) {
      return InvalidError(errc::kLanguageLeakage,
                          absl::StrCat("language leakage: ", language.code(),
                                       " was used for training"));
    }
  }
  CrossLingualReport report;
  double correct = 0.0;
  std::map<LanguageCode, double> per_correct;
  for (const FeatureRow& row : rows) {
    if (!holdout_languages.contains(row.language)) continue;
    const int predicted = model.Predict(row.bits) >= 0.5 ? 1 : 0;
    const double hit = predicted == row.label ? row.weight : 0.0;
    correct += hit;
    report.n += row.weight;
    per_correct[row.language] += hit;
    report.per_language[row.language].n += row.weight;
  }
  if (report.n <= 0.0) {
    return InvalidError(errc::kEmptyHoldout,
                        "empty holdout: no rows in the holdout languages");
  }
  report.pooled_accuracy = correct / report.n;
  for (auto& [language, entry] : report.per_language) {
    entry.accuracy = per_correct[language] / entry.n;
  }
  return report;
}

nlohmann::ordered_json CrossLingualToJson(const CrossLingualReport& report) {
  nlohmann::ordered_json json;
  json["pooled_accuracy"] = report.pooled_accuracy;
  json["n"] = report.n;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [language, entry] : report.per_language) {
    per[language.code()] = {{"accuracy", entry.accuracy}, {"n", entry.n}};
  }
  json["per_language"] = std::move(per);
  return json;
}

}  // namespace prefeval::interpret
