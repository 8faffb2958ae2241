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

#ifndef PREFEVAL_RELIABILITY_SPEARMAN_H_
#define PREFEVAL_RELIABILITY_SPEARMAN_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace prefeval::reliability {

// 1-based ranks with ties given the mean of the positions they span.
// Larger values get larger ranks.
std::vector<double> FractionalRanks(std::span<const double> values);

// Pearson correlation of the fractional ranks of `a` and `b`. Either input
// may be raw scores or ranks. Fails with length_mismatch (including fewer
// than two entries) and undefined_correlation when either side is constant.
absl::StatusOr<double> SpearmanRho(std::span<const double> a,
                                   std::span<const double> b);

}  // namespace prefeval::reliability

#endif  // PREFEVAL_RELIABILITY_SPEARMAN_H_
