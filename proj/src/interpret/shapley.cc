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

#include "prefeval/interpret/shapley.h"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "absl/strings/str_format.h"

namespace prefeval::interpret {
namespace {

// |S|! (n - |S| - 1)! / n! for n = 6 and |S| = 0..5.
constexpr std::array<double, kNumAxes> kCoalitionWeight = {
    1.0 / 6, 1.0 / 30, 1.0 / 60, 1.0 / 60, 1.0 / 30, 1.0 / 6};

}  // namespace

ShapleyExplainer::ShapleyExplainer(const PredictorTable& predictor,
                                   std::span<const std::uint8_t> background)
    : predictor_(predictor) {
  for (std::uint8_t bits : background) background_weight_[bits & 63] += 1.0;
  Init();
}

ShapleyExplainer::ShapleyExplainer(const PredictorTable& predictor,
                                   std::span<const FeatureRow> background)
    : predictor_(predictor) {
  for (const FeatureRow& row : background) {
    background_weight_[row.bits & 63] += row.weight;
  }
  Init();
}

void ShapleyExplainer::Init() {
  const double total =
      std::accumulate(background_weight_.begin(), background_weight_.end(), 0.0);
  if (total > 0) {
    for (double& w : background_weight_) w /= total;
  }
  baseline_ = 0.0;
  for (int c = 0; c < kNumCells; ++c) {
    baseline_ += background_weight_[c] * predictor_[c];
  }
}

ShapleyValues ShapleyExplainer::Explain(std::uint8_t instance) const {
  const unsigned x = instance & 63u;
  std::array<double, kNumCells> value{};
  for (unsigned s = 0; s < kNumCells; ++s) {
    double v = 0.0;
    for (unsigned c = 0; c < kNumCells; ++c) {
      if (background_weight_[c] == 0.0) continue;
      v += background_weight_[c] * predictor_[(x & s) | (c & ~s & 63u)];
    }
    value[s] = v;
  }
  ShapleyValues out;
  for (int k = 0; k < kNumAxes; ++k) {
    const unsigned bit = 1u << k;
    double phi = 0.0;
    for (unsigned s = 0; s < kNumCells; ++s) {
      if (s & bit) continue;
      phi += kCoalitionWeight[std::popcount(s)] * (value[s | bit] - value[s]);
    }
    out.phi[k] = phi;
  }
  out.prediction = predictor_[x];
  out.baseline = baseline_;
  return out;
}

namespace {

ShapleyReport Aggregate(std::vector<std::array<double, kNumAxes>> per_row,
                        double baseline) {
  ShapleyReport report;
  report.baseline = baseline;
  for (const auto& phi : per_row) {
    for (int k = 0; k < kNumAxes; ++k) report.mean_abs_phi[k] += std::abs(phi[k]);
  }
  if (!per_row.empty()) {
    for (double& m : report.mean_abs_phi) m /= static_cast<double>(per_row.size());
  }
  report.ordering = kAllAxes;
  std::stable_sort(report.ordering.begin(), report.ordering.end(),
                   [&](AxisId a, AxisId b) {
                     return report.mean_abs_phi[static_cast<int>(a)] >
                            report.mean_abs_phi[static_cast<int>(b)];
                   });
  report.per_row_phi = std::move(per_row);
  return report;
}

}  // namespace

ShapleyReport MeanAbsShapleySerial(const ShapleyExplainer& explainer,
                                   std::span<const FeatureRow> rows) {
  std::vector<std::array<double, kNumAxes>> per_row(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    per_row[i] = explainer.Explain(rows[i].bits).phi;
  }
  return Aggregate(std::move(per_row), explainer.baseline());
}

ShapleyReport MeanAbsShapleyParallel(const ShapleyExplainer& explainer,
                                     std::span<const FeatureRow> rows,
                                     int num_threads) {
  // At most 64 distinct inputs: explain each once, then scatter.
  std::array<std::array<double, kNumAxes>, kNumCells> cache{};
  std::array<bool, kNumCells> present{};
  for (const FeatureRow& row : rows) present[row.bits & 63] = true;
  const int threads = num_threads > 0 ? num_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int c = 0; c < kNumCells; ++c) {
    if (present[c]) cache[c] = explainer.Explain(static_cast<std::uint8_t>(c)).phi;
  }
  std::vector<std::array<double, kNumAxes>> per_row(rows.size());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t i = 0; i < rows.size(); ++i) {
    per_row[i] = cache[rows[i].bits & 63];
  }
  return Aggregate(std::move(per_row), explainer.baseline());
}

nlohmann::ordered_json ShapleyReportToJson(const ShapleyReport& report,
                                           bool include_rows) {
  nlohmann::ordered_json json;
  json["baseline"] = report.baseline;
  nlohmann::ordered_json axes = nlohmann::ordered_json::array();
  for (AxisId axis : report.ordering) {
    axes.push_back({{"axis", std::string(ToString(axis))},
                    {"mean_abs_phi", report.mean_abs_phi[static_cast<int>(axis)]}});
  }
  json["axes"] = std::move(axes);
  json["n_rows"] = report.per_row_phi.size();
  if (include_rows) {
    json["rows"] = report.per_row_phi;
  }
  return json;
}

std::string ShapleyReportToTable(const ShapleyReport& report) {
  std::string out = absl::StrFormat("%-16s %s\n", "Axis", "mean |phi|");
  for (AxisId axis : report.ordering) {
    absl::StrAppendFormat(&out, "%-16s %.6f\n", ToString(axis),
                          report.mean_abs_phi[static_cast<int>(axis)]);
  }
  return out;
}

}  // namespace prefeval::interpret
