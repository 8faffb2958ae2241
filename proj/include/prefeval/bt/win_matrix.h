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

#ifndef PREFEVAL_BT_WIN_MATRIX_H_
#define PREFEVAL_BT_WIN_MATRIX_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "prefeval/bt/subgroup.h"
#include "prefeval/core/types.h"

namespace prefeval::bt {

// Effective-win statistics of a set of systems. Ties count half a win for
// each side, so wins(i, j) + wins(j, i) == counts(i, j).
struct WinMatrix {
  std::vector<std::string> systems;
  Eigen::MatrixXd wins;    // c
  Eigen::MatrixXd counts;  // n, symmetric, zero diagonal

  int size() const { return static_cast<int>(systems.size()); }
};

// One comparison reduced to system indices, in the log's orientation.
struct PairOutcome {
  int a = 0;
  int b = 0;
  Choice overall = Choice::kA;
  // Cluster ids for rater- or sentence-level resampling.
  int rater = 0;
  int sentence = 0;
};

// The filtered log with systems indexed in sorted id order.
struct IndexedLog {
  std::vector<std::string> systems;
  std::vector<PairOutcome> outcomes;
  int num_raters = 0;
  int num_sentences = 0;
};

// Fails with empty_log when nothing passes the filter.
absl::StatusOr<IndexedLog> IndexLog(std::span<const ComparisonRecord> log,
                                    const SubgroupFilter& filter);

// Accumulates effective wins of `outcomes[indices[k]]` for every k, or of all
// outcomes when `indices` is empty.
void AccumulateWins(std::span<const PairOutcome> outcomes,
                    std::span<const std::uint32_t> indices,
                    Eigen::MatrixXd& wins);

WinMatrix WinMatrixFromWins(std::vector<std::string> systems,
                            Eigen::MatrixXd wins);

absl::StatusOr<WinMatrix> ComputeWinMatrix(std::span<const ComparisonRecord> log,
                                           const SubgroupFilter& filter);

}  // namespace prefeval::bt

#endif  // PREFEVAL_BT_WIN_MATRIX_H_
