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

#include "prefeval/bt/ranks.h"

namespace prefeval::bt {

std::vector<int> SignificanceRanks(std::span<const RatingInterval> intervals) {
  std::vector<int> ranks(intervals.size(), 1);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    for (std::size_t j = 0; j < intervals.size(); ++j) {
      if (i != j && intervals[j].lower > intervals[i].upper) ++ranks[i];
    }
  }
  return ranks;
}

}  // namespace prefeval::bt
