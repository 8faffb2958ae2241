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

#include "prefeval/reliability/spearman.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "prefeval/core/errors.h"

namespace prefeval::reliability {

std::vector<double> FractionalRanks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean;
    i = j + 1;
  }
  return ranks;
}

absl::StatusOr<double> SpearmanRho(std::span<const double> a,
                                   std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    return InvalidError(errc::kLengthMismatch,
                        absl::StrCat("length mismatch: ", a.size(), " vs ",
                                     b.size(), " (need equal lengths >= 2)"));
  }
  const std::vector<double> ra = FractionalRanks(a);
  const std::vector<double> rb = FractionalRanks(b);
  const double n = static_cast<double>(ra.size());
  const double mean_a = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mean_b = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - mean_a) * (rb[i] - mean_b);
    saa += (ra[i] - mean_a) * (ra[i] - mean_a);
    sbb += (rb[i] - mean_b) * (rb[i] - mean_b);
  }
  if (saa == 0.0 || sbb == 0.0) {
    return InvalidError(errc::kUndefinedCorrelation,
                        "undefined correlation: a ranking is constant");
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace prefeval::reliability
