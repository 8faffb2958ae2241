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

#ifndef PREFEVAL_SCHEDULER_PAIR_PLAN_H_
#define PREFEVAL_SCHEDULER_PAIR_PLAN_H_

#include <map>
#include <string>
#include <vector>

#include "prefeval/core/registry.h"
#include "prefeval/core/types.h"

namespace prefeval::scheduler {

// One (language, unordered system pair); system_a < system_b.
struct PlanCell {
  LanguageCode language;
  std::string system_a;
  std::string system_b;
};

// Remaining comparison targets per cell and remaining quota per rater. Both
// count outstanding tasks: assignment decrements, expiry restores.
class PairPlan {
 public:
  // Every cell whose two systems support the language gets
  // `target_per_cell`; every roster rater gets quota_total - quota_completed.
  static PairPlan Balanced(const Registry& registry, int target_per_cell);

  const std::vector<PlanCell>& cells() const { return cells_; }
  int target(int cell) const { return targets_[cell]; }
  void set_target(int cell, int value) { targets_[cell] = value; }

  int quota(const std::string& rater_id) const;
  void set_quota(const std::string& rater_id, int value) {
    quotas_[rater_id] = value;
  }

  // Cell indices for `language`.
  std::vector<int> CellsFor(const LanguageCode& language) const;

  void Take(int cell, const std::string& rater_id);
  void Restore(int cell, const std::string& rater_id);

 private:
  std::vector<PlanCell> cells_;
  std::vector<int> targets_;
  std::map<std::string, int> quotas_;
};

}  // namespace prefeval::scheduler

#endif  // PREFEVAL_SCHEDULER_PAIR_PLAN_H_
