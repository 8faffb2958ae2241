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

#ifndef PREFEVAL_BT_BT_FIT_H_
#define PREFEVAL_BT_BT_FIT_H_

#include <functional>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "prefeval/bt/win_matrix.h"

namespace prefeval::bt {

struct BtOptions {
  // Added to every off-diagonal effective-win entry before fitting.
  double pseudo_count = 0.0;
  // Stop when max_i |log p_i(t+1) - log p_i(t)| < tolerance.
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

// Bradley-Terry strengths, normalized to geometric mean 1.
struct BtStrengths {
  std::vector<double> p;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
};

// True iff the directed "i has effective wins over j" graph is strongly
// connected, the condition under which the maximum-likelihood strengths exist
// and are unique up to scale.
bool IsIdentifiable(const Eigen::MatrixXd& wins);

// sum_{i != j} wins(i, j) * log(p_i / (p_i + p_j)).
double BtLogLikelihood(const Eigen::MatrixXd& wins, const std::vector<double>& p);

// Called once per sweep with the 1-based iteration and the log-likelihood of
// the updated strengths.
using BtTrace = std::function<void(int iteration, double log_likelihood)>;

// Maximum-likelihood fit by the minorization-maximization iteration
//   p_i <- W_i / sum_j n_ij / (p_i + p_j),
// updating all systems from the previous sweep and renormalizing to
// geometric mean 1. Fails with non_identifiable or not_converged.
absl::StatusOr<BtStrengths> FitBradleyTerry(const WinMatrix& matrix,
                                            const BtOptions& options = {},
                                            const BtTrace& trace = nullptr);

}  // namespace prefeval::bt

#endif  // PREFEVAL_BT_BT_FIT_H_
