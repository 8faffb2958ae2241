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

#ifndef PREFEVAL_INTERPRET_FEATURES_H_
#define PREFEVAL_INTERPRET_FEATURES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prefeval/core/types.h"

namespace prefeval::interpret {

inline constexpr int kNumCells = 1 << kNumAxes;

// Bit k of `bits` is axis k in AxisId order: 1 iff that axis was judged A or
// BothGood. `label` is 1 iff the overall choice was A.
struct FeatureRow {
  std::uint8_t bits = 0;
  int label = 0;
  LanguageCode language;
  std::string comparison_id;
  double weight = 1.0;

  friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

struct FeatureOptions {
  // Keep overall BothGood/BothBad records; they get label 0.
  bool include_overall_ties = false;
  // Also emit each record seen from slot B: bits set for B or BothGood,
  // label 1 iff the overall choice was B.
  bool augment_orientation = false;
};

std::uint8_t EncodeAxes(const ComparisonRecord& record);

std::vector<FeatureRow> BuildFeatureDataset(
    std::span<const ComparisonRecord> log, const FeatureOptions& options = {});

// "101001"-style rendering, axis 0 first.
std::string BitString(std::uint8_t bits);

}  // namespace prefeval::interpret

#endif  // PREFEVAL_INTERPRET_FEATURES_H_
