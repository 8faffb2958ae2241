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

#ifndef PREFEVAL_BT_LEADERBOARD_H_
#define PREFEVAL_BT_LEADERBOARD_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "prefeval/bt/bootstrap.h"
#include "prefeval/bt/subgroup.h"
#include "prefeval/core/registry.h"
#include "prefeval/core/types.h"

namespace prefeval::bt {

struct LeaderboardConfig {
  BootstrapOptions bootstrap;
};

struct LeaderboardEntry {
  std::string system_id;
  double rating = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double ci_halfwidth = 0.0;
  int rank = 1;
  double win_rate_pct = 0.0;
  int n_comparisons = 0;
  // Distinct languages among the system's comparisons in the subgroup.
  int n_languages = 0;
};

struct Leaderboard {
  SubgroupFilter filter;
  // Sorted by rating, descending; ties broken by system id.
  std::vector<LeaderboardEntry> entries;
  std::uint64_t seed = 0;
  int replicates = 0;
  int redraws = 0;
  // Length of the log the board was computed from, and the filtered count.
  std::size_t log_size = 0;
  std::size_t n_records = 0;
};

// Number of comparisons per system inside the slice.
std::map<std::string, int> ComparisonCounts(std::span<const ComparisonRecord> log,
                                            const SubgroupFilter& filter);

// Point fit, bootstrap intervals, significance ranks and win rates for one
// slice. The stored interval is widened to contain the point estimate when
// the percentile interval does not.
absl::StatusOr<Leaderboard> BuildLeaderboard(std::span<const ComparisonRecord> log,
                                             const SubgroupFilter& filter,
                                             const LeaderboardConfig& config);

// Machine-readable export. `registry` (optional) adds display names and
// language counts.
nlohmann::ordered_json LeaderboardToJson(const Leaderboard& board,
                                         const Registry* registry);

// Aligned text table: Rank, Model, Score ± 95% CI, # comp, Win Rate, # lang.
std::string LeaderboardToTable(const Leaderboard& board,
                               const Registry* registry);

std::string LeaderboardToCsv(const Leaderboard& board, const Registry* registry);

}  // namespace prefeval::bt

#endif  // PREFEVAL_BT_LEADERBOARD_H_
