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

#include "prefeval/bt/win_rates.h"

#include <map>

#include "prefeval/core/errors.h"

namespace prefeval::bt {
namespace {

struct Tally {
  std::array<double, kNumAxes + 1> score{};
  int n = 0;
};

// Credits one choice to the two systems of a record.
void Credit(Choice choice, double& score_a, double& score_b) {
  switch (choice) {
    case Choice::kA:
      score_a += 1.0;
      break;
    case Choice::kB:
      score_b += 1.0;
      break;
    default:
      score_a += 0.5;
      score_b += 0.5;
      break;
  }
}

absl::StatusOr<std::map<std::string, Tally>> Count(
    std::span<const ComparisonRecord> log, const SubgroupFilter& filter) {
  std::map<std::string, Tally> tallies;
  for (const ComparisonRecord& record : log) {
    if (!filter.Matches(record)) continue;
    Tally& a = tallies[record.system_a];
    Tally& b = tallies[record.system_b];
    ++a.n;
    ++b.n;
    Credit(record.overall, a.score[0], b.score[0]);
    for (int k = 0; k < kNumAxes; ++k) {
      auto it = record.axes.find(kAllAxes[k]);
      if (it != record.axes.end()) Credit(it->second, a.score[k + 1], b.score[k + 1]);
    }
  }
  if (tallies.empty()) {
    return PreconditionError(errc::kEmptyLog, "filtered log is empty");
  }
  return tallies;
}

}  // namespace

absl::StatusOr<std::vector<SystemWinRate>> WinRates(
    std::span<const ComparisonRecord> log, const SubgroupFilter& filter) {
  auto tallies = Count(log, filter);
  if (!tallies.ok()) return tallies.status();
  std::vector<SystemWinRate> rates;
  for (const auto& [id, tally] : *tallies) {
    rates.push_back({id, 100.0 * tally.score[0] / tally.n, tally.n});
  }
  return rates;
}

absl::StatusOr<std::vector<AxisWinRates>> PerAxisWinRates(
    std::span<const ComparisonRecord> log, const SubgroupFilter& filter) {
  auto tallies = Count(log, filter);
  if (!tallies.ok()) return tallies.status();
  std::vector<AxisWinRates> rates;
  for (const auto& [id, tally] : *tallies) {
    AxisWinRates entry;
    entry.system_id = id;
    entry.n_comparisons = tally.n;
    for (int k = 0; k < kNumAxes; ++k) {
      entry.win_rate_pct[k] = 100.0 * tally.score[k + 1] / tally.n;
    }
    rates.push_back(entry);
  }
  return rates;
}

}  // namespace prefeval::bt
