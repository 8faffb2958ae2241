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

#include "prefeval/bt/bt_fit.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "prefeval/core/errors.h"

namespace prefeval::bt {
namespace {

// Marks every node reachable from node 0, following edges i->j when
// forward(i, j) holds.
template <typename Edge>
bool ReachesAll(int n, Edge edge) {
  std::vector<char> seen(n, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (!seen[j] && edge(i, j)) {
        seen[j] = 1;
        ++visited;
        stack.push_back(j);
      }
    }
  }
  return visited == n;
}

void NormalizeGeometricMean(std::vector<double>& p) {
  double mean_log = 0.0;
  for (double value : p) mean_log += std::log(value);
  mean_log /= static_cast<double>(p.size());
  const double scale = std::exp(-mean_log);
  for (double& value : p) value *= scale;
}

}  // namespace

bool IsIdentifiable(const Eigen::MatrixXd& wins) {
  const int n = static_cast<int>(wins.rows());
  if (n < 2) return false;
  return ReachesAll(n, [&](int i, int j) { return i != j && wins(i, j) > 0; }) &&
         ReachesAll(n, [&](int i, int j) { return i != j && wins(j, i) > 0; });
}

double BtLogLikelihood(const Eigen::MatrixXd& wins,
                       const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || wins(i, j) == 0.0) continue;
      total += wins(i, j) * std::log(p[i] / (p[i] + p[j]));
    }
  }
  return total;
}

absl::StatusOr<BtStrengths> FitBradleyTerry(const WinMatrix& matrix,
                                            const BtOptions& options,
                                            const BtTrace& trace) {
  const int n = matrix.size();
  Eigen::MatrixXd wins = matrix.wins;
  if (options.pseudo_count > 0.0) {
    wins.array() += options.pseudo_count;
  }
  wins.diagonal().setZero();
  if (!IsIdentifiable(wins)) {
    return PreconditionError(
        errc::kNonIdentifiable,
        absl::StrCat("non-identifiable: the comparison graph of ", n,
                     " systems is not strongly connected by wins"));
  }
  const Eigen::MatrixXd counts = wins + wins.transpose();
  const Eigen::VectorXd total_wins = wins.rowwise().sum();

  BtStrengths result;
  std::vector<double> p(n, 1.0);
  std::vector<double> next(n, 0.0);
  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    for (int i = 0; i < n; ++i) {
      double denominator = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i != j && counts(i, j) > 0.0) {
          denominator += counts(i, j) / (p[i] + p[j]);
        }
      }
      next[i] = total_wins[i] / denominator;
    }
    NormalizeGeometricMean(next);
    double max_step = 0.0;
    for (int i = 0; i < n; ++i) {
      max_step = std::max(max_step, std::abs(std::log(next[i] / p[i])));
    }
    p.swap(next);
    result.iterations = iteration;
    if (trace) trace(iteration, BtLogLikelihood(wins, p));
    if (max_step < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    return MakeError(absl::StatusCode::kResourceExhausted, errc::kNotConverged,
                     absl::StrCat("not converged after ", options.max_iterations,
                                  " iterations"));
  }
  result.log_likelihood = BtLogLikelihood(wins, p);
  result.p = std::move(p);
  return result;
}

}  // namespace prefeval::bt
