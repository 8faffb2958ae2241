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

#ifndef PREFEVAL_BT_BOOTSTRAP_H_
#define PREFEVAL_BT_BOOTSTRAP_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "prefeval/bt/bt_fit.h"
#include "prefeval/bt/subgroup.h"
#include "prefeval/bt/win_matrix.h"
#include "prefeval/core/types.h"

namespace prefeval::bt {

// What one bootstrap draw resamples. Records are the default; rater and
// sentence clusters exist for sensitivity studies.
enum class ResampleUnit { kRecord, kRater, kSentence };

struct BootstrapOptions {
  int replicates = 500;
  double level = 0.95;
  std::uint64_t seed = 0;
  ResampleUnit unit = ResampleUnit::kRecord;
  BtOptions fit;
  // OpenMP threads for the parallel kernel; 0 uses the runtime default.
  int num_threads = 0;
};

struct BootstrapResult {
  std::vector<std::string> systems;
  // Percentile interval per system, Elo scale.
  std::vector<double> lower;
  std::vector<double> upper;
  // Replicate ratings, replicate-major: ratings[r * S + i].
  std::vector<double> ratings;
  int replicates = 0;
  // Resamples discarded as non-identifiable and drawn again.
  int redraws = 0;
};

// Replicate r, attempt t draws from a generator seeded with
// DeriveSeed(seed, r, t), so the serial and the parallel kernels return
// bit-identical results. A replicate whose resample is non-identifiable is
// redrawn; more than 10 * replicates redraws in total is degenerate_bootstrap.
absl::StatusOr<BootstrapResult> BootstrapSerial(const IndexedLog& log,
                                                const BootstrapOptions& options);
absl::StatusOr<BootstrapResult> BootstrapParallel(
    const IndexedLog& log, const BootstrapOptions& options);

// Filters, indexes and runs the parallel kernel.
absl::StatusOr<BootstrapResult> BootstrapCis(
    std::span<const ComparisonRecord> log, const SubgroupFilter& filter,
    const BootstrapOptions& options);

// Linear-interpolation percentile (the common "type 7" definition) of
// `values`, which is sorted in place.
double Percentile(std::vector<double>& values, double q);

}  // namespace prefeval::bt

#endif  // PREFEVAL_BT_BOOTSTRAP_H_
