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

#include "prefeval/bt/win_matrix.h"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "prefeval/core/errors.h"

namespace prefeval::bt {

absl::StatusOr<IndexedLog> IndexLog(std::span<const ComparisonRecord> log,
                                    const SubgroupFilter& filter) {
  std::vector<const ComparisonRecord*> selected;
  std::map<std::string, int> system_index;
  for (const ComparisonRecord& record : log) {
    if (!filter.Matches(record)) continue;
    selected.push_back(&record);
    system_index.emplace(record.system_a, 0);
    system_index.emplace(record.system_b, 0);
  }
  if (selected.empty()) {
    return PreconditionError(errc::kEmptyLog, "filtered log is empty");
  }
  IndexedLog indexed;
  for (auto& [id, index] : system_index) {
    index = static_cast<int>(indexed.systems.size());
    indexed.systems.push_back(id);
  }
  std::unordered_map<std::string, int> raters;
  std::unordered_map<std::string, int> sentences;
  indexed.outcomes.reserve(selected.size());
  for (const ComparisonRecord* record : selected) {
    PairOutcome outcome;
    outcome.a = system_index[record->system_a];
    outcome.b = system_index[record->system_b];
    outcome.overall = record->overall;
    outcome.rater =
        raters.emplace(record->rater_id, static_cast<int>(raters.size()))
            .first->second;
    outcome.sentence =
        sentences
            .emplace(record->sentence_id, static_cast<int>(sentences.size()))
            .first->second;
    indexed.outcomes.push_back(outcome);
  }
  indexed.num_raters = static_cast<int>(raters.size());
  indexed.num_sentences = static_cast<int>(sentences.size());
  return indexed;
}

void AccumulateWins(std::span<const PairOutcome> outcomes,
                    std::span<const std::uint32_t> indices,
                    Eigen::MatrixXd& wins) {
  auto add = [&wins](const PairOutcome& o) {
    switch (o.overall) {
      case Choice::kA:
        wins(o.a, o.b) += 1.0;
        break;
      case Choice::kB:
        wins(o.b, o.a) += 1.0;
        break;
      case Choice::kBothGood:
      case Choice::kBothBad:
        wins(o.a, o.b) += 0.5;
        wins(o.b, o.a) += 0.5;
        break;
    }
  };
  if (indices.empty()) {
    for (const PairOutcome& outcome : outcomes) add(outcome);
  } else {
    for (std::uint32_t index : indices) add(outcomes[index]);
  }
}

WinMatrix WinMatrixFromWins(std::vector<std::string> systems,
                            Eigen::MatrixXd wins) {
  WinMatrix matrix;
  matrix.systems = std::move(systems);
  wins.diagonal().setZero();
  matrix.counts = wins + wins.transpose();
  matrix.wins = std::move(wins);
  return matrix;
}

absl::StatusOr<WinMatrix> ComputeWinMatrix(std::span<const ComparisonRecord> log,
                                           const SubgroupFilter& filter) {
  auto indexed = IndexLog(log, filter);
  if (!indexed.ok()) return indexed.status();
  const int n = static_cast<int>(indexed->systems.size());
  Eigen::MatrixXd wins = Eigen::MatrixXd::Zero(n, n);
  AccumulateWins(indexed->outcomes, {}, wins);
  return WinMatrixFromWins(std::move(indexed->systems), std::move(wins));
}

}  // namespace prefeval::bt
