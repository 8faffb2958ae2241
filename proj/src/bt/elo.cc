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

#include "prefeval/bt/elo.h"

#include <cmath>

namespace prefeval::bt {

std::vector<double> MapToElo(const BtStrengths& strengths) {
  return MapToElo(strengths.p);
}

std::vector<double> MapToElo(std::span<const double> p) {
  std::vector<double> ratings(p.size());
  if (p.empty()) return ratings;
  double mean_log = 0.0;
  for (double value : p) mean_log += std::log10(value);
  mean_log /= static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    ratings[i] = kEloAnchor + kEloScale * (std::log10(p[i]) - mean_log);
  }
  return ratings;
}

double EloWinProbability(double rating_i, double rating_j) {
  return 1.0 / (1.0 + std::pow(10.0, (rating_j - rating_i) / kEloScale));
}

}  // namespace prefeval::bt
