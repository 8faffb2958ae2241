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

#ifndef PREFEVAL_BT_WIN_RATES_H_
#define PREFEVAL_BT_WIN_RATES_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "prefeval/bt/subgroup.h"
#include "prefeval/core/types.h"

namespace prefeval::bt {

struct SystemWinRate {
  std::string system_id;
  // 100 * (strict wins + 0.5 * ties) / comparisons.
  double win_rate_pct = 0.0;
  int n_comparisons = 0;
};

// Overall-preference win rates, sorted by system id. Systems without
// comparisons in the slice are absent. Fails with empty_log.
absl::StatusOr<std::vector<SystemWinRate>> WinRates(
    std::span<const ComparisonRecord> log, const SubgroupFilter& filter);

struct AxisWinRates {
  std::string system_id;
  std::array<double, kNumAxes> win_rate_pct{};
  int n_comparisons = 0;
};

// The same statistic computed on each perceptual axis choice.
absl::StatusOr<std::vector<AxisWinRates>> PerAxisWinRates(
    std::span<const ComparisonRecord> log, const SubgroupFilter& filter);

}  // namespace prefeval::bt

#endif  // PREFEVAL_BT_WIN_RATES_H_
