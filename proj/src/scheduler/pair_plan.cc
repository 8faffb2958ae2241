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

#include "prefeval/scheduler/pair_plan.h"

#include <algorithm>

namespace prefeval::scheduler {

PairPlan PairPlan::Balanced(const Registry& registry, int target_per_cell) {
  PairPlan plan;
  std::vector<const SystemEntry*> systems;
  for (const SystemEntry& system : registry.manifest().systems) {
    systems.push_back(&system);
  }
  std::sort(systems.begin(), systems.end(),
            [](const SystemEntry* a, const SystemEntry* b) { return a->id < b->id; });
  for (const LanguageCode& language : registry.manifest().languages) {
    for (std::size_t i = 0; i < systems.size(); ++i) {
      if (!systems[i]->supported_languages.contains(language)) continue;
      for (std::size_t j = i + 1; j < systems.size(); ++j) {
        if (!systems[j]->supported_languages.contains(language)) continue;
        plan.cells_.push_back({language, systems[i]->id, systems[j]->id});
        plan.targets_.push_back(target_per_cell);
      }
    }
  }
  for (const RaterEntry& rater : registry.manifest().raters) {
    plan.quotas_[rater.id] = rater.quota_total - rater.quota_completed;
  }
  return plan;
}

int PairPlan::quota(const std::string& rater_id) const {
  auto it = quotas_.find(rater_id);
  return it == quotas_.end() ? 0 : it->second;
}

std::vector<int> PairPlan::CellsFor(const LanguageCode& language) const {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
    if (cells_[c].language == language) out.push_back(c);
  }
  return out;
}

void PairPlan::Take(int cell, const std::string& rater_id) {
  --targets_[cell];
  --quotas_[rater_id];
}

void PairPlan::Restore(int cell, const std::string& rater_id) {
  ++targets_[cell];
  ++quotas_[rater_id];
}

}  // namespace prefeval::scheduler
