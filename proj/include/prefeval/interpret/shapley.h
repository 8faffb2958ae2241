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

#ifndef PREFEVAL_INTERPRET_SHAPLEY_H_
#define PREFEVAL_INTERPRET_SHAPLEY_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "prefeval/core/types.h"
#include "prefeval/interpret/features.h"

namespace prefeval::interpret {

// Any predictor over the six binary axes, tabulated on its 64 inputs.
using PredictorTable = std::array<double, kNumCells>;

struct ShapleyValues {
  std::array<double, kNumAxes> phi{};
  double prediction = 0.0;
  double baseline = 0.0;
};

// Exact interventional Shapley values. The background is reduced to its
// 64-cell histogram, so v(S) = sum_c w_c f(x on S, c off S) / sum_c w_c and
// each explanation enumerates the 64 coalitions.
class ShapleyExplainer {
 public:
  ShapleyExplainer(const PredictorTable& predictor,
                   std::span<const std::uint8_t> background);
  // Weighted background, one weight per row.
  ShapleyExplainer(const PredictorTable& predictor,
                   std::span<const FeatureRow> background);

  ShapleyValues Explain(std::uint8_t instance) const;
  double baseline() const { return baseline_; }

 private:
  void Init();

  PredictorTable predictor_;
  std::array<double, kNumCells> background_weight_{};
  double baseline_ = 0.0;
};

struct ShapleyReport {
  // Mean |phi| per axis, in AxisId order.
  std::array<double, kNumAxes> mean_abs_phi{};
  // Axes sorted by mean |phi|, descending (stable on AxisId order).
  std::array<AxisId, kNumAxes> ordering{};
  double baseline = 0.0;
  std::vector<std::array<double, kNumAxes>> per_row_phi;
};

// Explains every row. The serial and OpenMP versions produce identical
// reports: rows are explained independently and aggregated in row order.
ShapleyReport MeanAbsShapleySerial(const ShapleyExplainer& explainer,
                                   std::span<const FeatureRow> rows);
ShapleyReport MeanAbsShapleyParallel(const ShapleyExplainer& explainer,
                                     std::span<const FeatureRow> rows,
                                     int num_threads = 0);

nlohmann::ordered_json ShapleyReportToJson(const ShapleyReport& report,
                                           bool include_rows);
// Ordered bars: "axis  mean|phi|" lines, largest first.
std::string ShapleyReportToTable(const ShapleyReport& report);

}  // namespace prefeval::interpret

#endif  // PREFEVAL_INTERPRET_SHAPLEY_H_
