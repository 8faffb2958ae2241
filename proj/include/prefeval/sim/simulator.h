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

#ifndef PREFEVAL_SIM_SIMULATOR_H_
#define PREFEVAL_SIM_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "prefeval/core/registry.h"
#include "prefeval/core/rng.h"
#include "prefeval/core/types.h"

namespace prefeval::sim {

using AxisVector = std::array<double, kNumAxes>;

// Ground truth and sizing of a synthetic benchmark.
//
// Overall choices follow a Bradley-Terry model on the Elo scale with Gaussian
// rater noise. Axis choices are logistic in the axis-quality gap, tilted
// toward the overall outcome in proportion to the axis weight, so a model of
// overall-from-axes can recover the weights.
struct WorldSpec {
  int n_systems = 7;
  // Elo scale with mean 1000; empty means all systems are equal.
  std::vector<double> true_ratings;
  // Per system, per axis, in [0, 1]; empty means 0.5 everywhere.
  std::vector<AxisVector> axis_quality;
  AxisVector axis_weights = {1.0 / 6, 1.0 / 6, 1.0 / 6,
                             1.0 / 6, 1.0 / 6, 1.0 / 6};
  // Standard deviation of the per-judgement Elo offset.
  double rater_noise = 0.0;
  double tie_rate = 0.0;
  int n_raters = 20;
  // Sentences per language.
  int n_sentences = 30;
  std::vector<LanguageCode> languages = {*LanguageCode::Parse("hin")};
  std::vector<std::string> domains = {"news"};
  int quota_per_rater = kDefaultRaterQuota;
  // Plan target per (language, pair) cell; 0 leaves only quotas binding.
  int target_per_cell = 0;
  // Logit slope on the axis-quality gap.
  double axis_sharpness = 4.0;
  // Logit tilt toward the overall outcome per unit of axis weight.
  double axis_tilt = 10.0;
  // Chance that an axis repeats an overall tie instead of being drawn.
  double axis_tie_rate = 0.5;
  std::uint64_t seed = 0;

  friend bool operator==(const WorldSpec&, const WorldSpec&) = default;
};

absl::Status ValidateSpec(const WorldSpec& spec);

// `n` ratings spaced `gap` apart, best first, centered on 1000.
std::vector<double> EvenlySpacedRatings(int n, double gap);

absl::StatusOr<WorldSpec> SpecFromJson(const nlohmann::ordered_json& json);
nlohmann::ordered_json SpecToJson(const WorldSpec& spec);

struct SimulatedWorld {
  WorldSpec spec;
  BenchmarkManifest manifest;
  std::vector<ComparisonRecord> log;
  // Indexed like manifest.systems.
  std::vector<double> true_ratings;
  AxisVector axis_weights{};
};

// System ids are sys01, sys02, ... in manifest order.
std::string SystemId(int index, int n_systems);

// Manifest only; the log is empty.
absl::StatusOr<SimulatedWorld> GenerateWorld(const WorldSpec& spec);

struct Judgement {
  Choice overall = Choice::kA;
  std::map<AxisId, Choice> axes;
};

// One judgement of system `a` (slot A) against system `b` (slot B), by
// manifest index.
Judgement DrawJudgement(const WorldSpec& spec, int a, int b, Rng& rng);

// Closed-form probability that `a` beats `b` without noise or ties.
double WinProbability(const WorldSpec& spec, int a, int b);

// A validated, canonically ordered record of `rater_id` judging the pair on
// `sentence_id`.
absl::StatusOr<ComparisonRecord> SimulateComparison(
    const SimulatedWorld& world, const std::string& rater_id,
    const std::string& sentence_id, const std::string& system_a,
    const std::string& system_b, std::uint64_t seed);

// Drives the scheduler with simulated raters until every quota or plan target
// is spent.
absl::StatusOr<SimulatedWorld> RunSimulation(const WorldSpec& spec);

}  // namespace prefeval::sim

#endif  // PREFEVAL_SIM_SIMULATOR_H_
