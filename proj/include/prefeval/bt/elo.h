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

#ifndef PREFEVAL_BT_ELO_H_
#define PREFEVAL_BT_ELO_H_

#include <span>
#include <vector>

#include "prefeval/bt/bt_fit.h"

namespace prefeval::bt {

inline constexpr double kEloAnchor = 1000.0;
inline constexpr double kEloScale = 400.0;

// rating_i = 1000 + 400 * log10(p_i), with log10 p centered so that the
// arithmetic mean of the ratings is exactly the anchor.
std::vector<double> MapToElo(const BtStrengths& strengths);
std::vector<double> MapToElo(std::span<const double> p);

// P(i beats j) = 1 / (1 + 10^((R_j - R_i) / 400)).
double EloWinProbability(double rating_i, double rating_j);

}  // namespace prefeval::bt

#endif  // PREFEVAL_BT_ELO_H_
