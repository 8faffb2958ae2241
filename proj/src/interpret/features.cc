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

#include "prefeval/interpret/features.h"

namespace prefeval::interpret {
namespace {

std::uint8_t Encode(const ComparisonRecord& record, Choice side) {
  std::uint8_t bits = 0;
  for (int k = 0; k < kNumAxes; ++k) {
    auto it = record.axes.find(kAllAxes[k]);
    if (it == record.axes.end()) continue;
    if (it->second == side || it->second == Choice::kBothGood) bits |= 1u << k;
  }
  return bits;
}

}  // namespace

std::uint8_t EncodeAxes(const ComparisonRecord& record) {
  return Encode(record, Choice::kA);
}

std::vector<FeatureRow> BuildFeatureDataset(
    std::span<const ComparisonRecord> log, const FeatureOptions& options) {
  std::vector<FeatureRow> rows;
  rows.reserve(log.size() * (options.augment_orientation ? 2 : 1));
  for (const ComparisonRecord& record : log) {
    if (IsTie(record.overall) && !options.include_overall_ties) continue;
    rows.push_back({Encode(record, Choice::kA), record.overall == Choice::kA,
                    record.language, record.id, 1.0});
    if (options.augment_orientation) {
      rows.push_back({Encode(record, Choice::kB), record.overall == Choice::kB,
                      record.language, record.id, 1.0});
    }
  }
  return rows;
}

std::string BitString(std::uint8_t bits) {
  std::string out(kNumAxes, '0');
  for (int k = 0; k < kNumAxes; ++k) {
    if (bits & (1u << k)) out[k] = '1';
  }
  return out;
}

}  // namespace prefeval::interpret
