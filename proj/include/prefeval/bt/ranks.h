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

#ifndef PREFEVAL_BT_RANKS_H_
#define PREFEVAL_BT_RANKS_H_

#include <span>
#include <vector>

namespace prefeval::bt {

struct RatingInterval {
  double rating = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Significance-aware ranks: j is strictly better than i iff lower_j >
// upper_i, and rank_i = 1 + #{j strictly better than i}. Overlapping
// systems share a rank, so ranks can skip (1, 2, 2, 4) and need not be dense.
std::vector<int> SignificanceRanks(std::span<const RatingInterval> intervals);

}  // namespace prefeval::bt

#endif  // PREFEVAL_BT_RANKS_H_
