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

#include "prefeval/bt/bootstrap.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "prefeval/bt/elo.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/rng.h"

namespace prefeval::bt {
namespace {

struct ReplicateOutcome {
  absl::Status status;
  int redraws = 0;
  std::vector<double> ratings;
};

// Outcome indices grouped by resampling cluster.
using Clusters = std::vector<std::vector<std::uint32_t>>;

Clusters BuildClusters(const IndexedLog& log, ResampleUnit unit) {
  Clusters clusters;
  if (unit == ResampleUnit::kRecord) return clusters;
  clusters.resize(unit == ResampleUnit::kRater ? log.num_raters
                                               : log.num_sentences);
  for (std::uint32_t k = 0; k < log.outcomes.size(); ++k) {
    const PairOutcome& o = log.outcomes[k];
    clusters[unit == ResampleUnit::kRater ? o.rater : o.sentence].push_back(k);
  }
  return clusters;
}

void AddOutcome(const PairOutcome& o, Eigen::MatrixXd& wins) {
  switch (o.overall) {
    case Choice::kA:
      wins(o.a, o.b) += 1.0;
      break;
    case Choice::kB:
      wins(o.b, o.a) += 1.0;
      break;
    default:
      wins(o.a, o.b) += 0.5;
      wins(o.b, o.a) += 0.5;
      break;
  }
}

ReplicateOutcome RunReplicate(const IndexedLog& log, const Clusters& clusters,
                              const BootstrapOptions& options, int replicate,
                              int max_attempts) {
  ReplicateOutcome result;
  const int n = static_cast<int>(log.systems.size());
  const std::size_t num_outcomes = log.outcomes.size();
  Eigen::MatrixXd wins(n, n);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(DeriveSeed(options.seed, static_cast<std::uint64_t>(replicate),
                       static_cast<std::uint64_t>(attempt)));
    wins.setZero();
    if (clusters.empty()) {
      for (std::size_t k = 0; k < num_outcomes; ++k) {
        AddOutcome(log.outcomes[UniformIndex(rng, num_outcomes)], wins);
      }
    } else {
      for (std::size_t k = 0; k < clusters.size(); ++k) {
        for (std::uint32_t index : clusters[UniformIndex(rng, clusters.size())]) {
          AddOutcome(log.outcomes[index], wins);
        }
      }
    }
    WinMatrix matrix;
    matrix.wins = wins;
    matrix.counts = wins + wins.transpose();
    matrix.systems = log.systems;
    auto fit = FitBradleyTerry(matrix, options.fit);
    if (fit.ok()) {
      result.ratings = MapToElo(*fit);
      return result;
    }
    if (ErrorCodeOf(fit.status()) != errc::kNonIdentifiable) {
      result.status = fit.status();
      return result;
    }
    ++result.redraws;
  }
  result.status = MakeError(
      absl::StatusCode::kFailedPrecondition, errc::kDegenerateBootstrap,
      absl::StrCat("degenerate bootstrap: replicate ", replicate,
                   " stayed non-identifiable after ", max_attempts, " draws"));
  return result;
}

absl::StatusOr<BootstrapResult> Assemble(
    const IndexedLog& log, const BootstrapOptions& options,
    std::vector<ReplicateOutcome> outcomes) {
  const int n = static_cast<int>(log.systems.size());
  BootstrapResult result;
  result.systems = log.systems;
  result.replicates = options.replicates;
  result.ratings.reserve(static_cast<std::size_t>(options.replicates) * n);
  for (ReplicateOutcome& outcome : outcomes) {
    if (!outcome.status.ok()) return outcome.status;
    result.redraws += outcome.redraws;
    result.ratings.insert(result.ratings.end(), outcome.ratings.begin(),
                          outcome.ratings.end());
  }
  if (result.redraws > 10 * options.replicates) {
    return MakeError(absl::StatusCode::kFailedPrecondition,
                     errc::kDegenerateBootstrap,
                     absl::StrCat("degenerate bootstrap: ", result.redraws,
                                  " redraws for ", options.replicates,
                                  " replicates"));
  }
  const double tail = (1.0 - options.level) / 2.0;
  std::vector<double> column(options.replicates);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < options.replicates; ++r) {
      column[r] = result.ratings[static_cast<std::size_t>(r) * n + i];
    }
    result.lower.push_back(Percentile(column, tail));
    result.upper.push_back(Percentile(column, 1.0 - tail));
  }
  return result;
}

absl::Status CheckOptions(const IndexedLog& log,
                          const BootstrapOptions& options) {
  if (options.replicates < 1) {
    return InvalidError(errc::kInvalidArgument, "replicates must be >= 1");
  }
  if (!(options.level > 0.0 && options.level < 1.0)) {
    return InvalidError(errc::kInvalidArgument, "level must be in (0, 1)");
  }
  if (log.outcomes.empty()) {
    return PreconditionError(errc::kEmptyLog, "filtered log is empty");
  }
  return absl::OkStatus();
}

}  // namespace

double Percentile(std::vector<double>& values, double q) {
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  const double position = q * static_cast<double>(values.size() - 1);
  const std::size_t below = static_cast<std::size_t>(std::floor(position));
  const std::size_t above = std::min(below + 1, values.size() - 1);
  const double fraction = position - static_cast<double>(below);
  if (values[below] == values[above]) return values[below];
  return values[below] + fraction * (values[above] - values[below]);
}

absl::StatusOr<BootstrapResult> BootstrapSerial(const IndexedLog& log,
                                                const BootstrapOptions& options) {
  if (auto status = CheckOptions(log, options); !status.ok()) return status;
  const Clusters clusters = BuildClusters(log, options.unit);
  const int max_attempts = 10 * options.replicates + 1;
  std::vector<ReplicateOutcome> outcomes(options.replicates);
  for (int r = 0; r < options.replicates; ++r) {
    outcomes[r] = RunReplicate(log, clusters, options, r, max_attempts);
  }
  return Assemble(log, options, std::move(outcomes));
}

absl::StatusOr<BootstrapResult> BootstrapParallel(
    const IndexedLog& log, const BootstrapOptions& options) {
  if (auto status = CheckOptions(log, options); !status.ok()) return status;
  const Clusters clusters = BuildClusters(log, options.unit);
  const int max_attempts = 10 * options.replicates + 1;
  const int threads =
      options.num_threads > 0 ? options.num_threads : omp_get_max_threads();
  std::vector<ReplicateOutcome> outcomes(options.replicates);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (int r = 0; r < options.replicates; ++r) {
    outcomes[r] = RunReplicate(log, clusters, options, r, max_attempts);
  }
  return Assemble(log, options, std::move(outcomes));
}

absl::StatusOr<BootstrapResult> BootstrapCis(
    std::span<const ComparisonRecord> log, const SubgroupFilter& filter,
    const BootstrapOptions& options) {
  auto indexed = IndexLog(log, filter);
  if (!indexed.ok()) return indexed.status();
  return BootstrapParallel(*indexed, options);
}

}  // namespace prefeval::bt
