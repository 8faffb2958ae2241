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

#ifndef PREFEVAL_RELIABILITY_CURVES_H_
#define PREFEVAL_RELIABILITY_CURVES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "prefeval/bt/bt_fit.h"
#include "prefeval/core/types.h"

namespace prefeval::reliability {

enum class CurveMode { kRaters, kSentences };

// What each trial's ranking is correlated with.
enum class Reference {
  // The leaderboard of the whole log over the chosen systems.
  kFullData,
  // Sentence curves only: the leaderboard of the trial's fixed raters on all
  // their records.
  kFixedRaters,
};

struct ReliabilityPoint {
  int axis_value = 0;
  int n_systems = 0;
  double mean_rho = 0.0;
  double rho_std = 0.0;
  double mean_ci_width = 0.0;
  int trials = 0;
  int replicates = 0;
  // Subsamples discarded as non-identifiable and drawn again.
  int redraws = 0;
};

struct ReliabilityCurve {
  CurveMode mode = CurveMode::kRaters;
  std::optional<int> fixed_raters;
  Reference reference = Reference::kFullData;
  std::vector<ReliabilityPoint> grid;
  // Full-data fit over the chosen systems, sorted by id.
  std::vector<std::string> systems;
  std::vector<double> reference_ratings;
};

struct ReliabilityOptions {
  // Systems to rank; empty means every system in the log.
  std::vector<std::string> systems;
  std::vector<int> grid;
  int trials = 20;
  int bootstrap_replicates = 100;
  double level = 0.95;
  std::uint64_t seed = 0;
  // Sentence curves: raters held fixed in each trial.
  int fixed_raters = 200;
  Reference reference = Reference::kFullData;
  bt::BtOptions fit;
  // Draws per trial before the subsample is declared non-identifiable.
  int max_attempts = 100;
  // OpenMP threads for the parallel kernels; 0 uses the runtime default.
  int num_threads = 0;
};

// Trial t at grid index g draws its subsample from DeriveSeed(seed, g, t)
// streams and bootstraps with `seed` itself, so n = everything reproduces
// the full-data fit and interval widths exactly. The serial and parallel
// versions return identical curves.
absl::StatusOr<ReliabilityCurve> RaterSubsampleCurveSerial(
    std::span<const ComparisonRecord> log, const ReliabilityOptions& options);
absl::StatusOr<ReliabilityCurve> RaterSubsampleCurve(
    std::span<const ComparisonRecord> log, const ReliabilityOptions& options);

absl::StatusOr<ReliabilityCurve> SentenceSubsampleCurveSerial(
    std::span<const ComparisonRecord> log, const ReliabilityOptions& options);
absl::StatusOr<ReliabilityCurve> SentenceSubsampleCurve(
    std::span<const ComparisonRecord> log, const ReliabilityOptions& options);

// Per-language sentence quotas summing to `total`: equal shares, the
// remainder handed out one at a time in `order`, and any share above a
// language's `available` count passed on round-robin to languages with room.
std::vector<int> StratifiedQuotas(std::span<const int> available,
                                  std::span<const int> order, int total);

struct Threshold {
  int axis_value = 0;
  double mean_ci_width = 0.0;
};

// First grid point with mean_rho >= target, or nullopt when never reached.
std::optional<Threshold> FindThreshold(const ReliabilityCurve& curve,
                                       double target_rho = 0.95);

// axis_value,n_systems,mean_rho,rho_std,mean_ci_width,trials
std::string CurveToCsv(const ReliabilityCurve& curve);
nlohmann::ordered_json CurveToJson(const ReliabilityCurve& curve);

}  // namespace prefeval::reliability

#endif  // PREFEVAL_RELIABILITY_CURVES_H_
