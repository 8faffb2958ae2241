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

#include "prefeval/reliability/curves.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <numeric>
#include <unordered_map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "prefeval/bt/bootstrap.h"
#include "prefeval/bt/elo.h"
#include "prefeval/bt/subgroup.h"
#include "prefeval/bt/win_matrix.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/rng.h"
#include "prefeval/reliability/spearman.h"

namespace prefeval::reliability {
namespace {

// The filtered log with the cluster bookkeeping the samplers need.
struct Population {
  bt::IndexedLog indexed;
  // Language index (into `languages`) of each sentence cluster.
  std::vector<int> sentence_language;
  std::vector<LanguageCode> languages;
  std::vector<double> reference_ratings;
};

struct TrialResult {
  absl::Status status;
  double rho = 0.0;
  double width = 0.0;
  int redraws = 0;
};

absl::StatusOr<std::vector<double>> FitRatings(const bt::IndexedLog& log,
                                               const bt::BtOptions& fit) {
  const int n = static_cast<int>(log.systems.size());
  Eigen::MatrixXd wins = Eigen::MatrixXd::Zero(n, n);
  bt::AccumulateWins(log.outcomes, {}, wins);
  auto strengths = bt::FitBradleyTerry(bt::WinMatrixFromWins(log.systems, wins), fit);
  if (!strengths.ok()) return strengths.status();
  return bt::MapToElo(*strengths);
}

absl::StatusOr<Population> BuildPopulation(std::span<const ComparisonRecord> log,
                                           const ReliabilityOptions& options) {
  if (!options.systems.empty()) {
    std::set<std::string> present;
    for (const ComparisonRecord& record : log) {
      present.insert(record.system_a);
      present.insert(record.system_b);
    }
    for (const std::string& system : options.systems) {
      if (!present.contains(system)) {
        return InvalidError(errc::kInvalidArgument,
                            absl::StrCat("system ", system,
                                         " has no comparisons in the log"));
      }
    }
  }
  bt::SubgroupFilter filter;
  filter.systems = options.systems;
  auto indexed = bt::IndexLog(log, filter);
  if (!indexed.ok()) return indexed.status();
  Population population;
  population.indexed = std::move(*indexed);

  // Mirror IndexLog's first-appearance sentence numbering.
  std::unordered_map<std::string, int> sentences;
  std::map<LanguageCode, int> language_index;
  std::vector<LanguageCode> sentence_language;
  for (const ComparisonRecord& record : log) {
    if (!filter.Matches(record)) continue;
    if (sentences.emplace(record.sentence_id, static_cast<int>(sentences.size()))
            .second) {
      sentence_language.push_back(record.language);
      language_index.emplace(record.language, 0);
    }
  }
  for (auto& [language, index] : language_index) {
    index = static_cast<int>(population.languages.size());
    population.languages.push_back(language);
  }
  for (const LanguageCode& language : sentence_language) {
    population.sentence_language.push_back(language_index[language]);
  }

  auto reference = FitRatings(population.indexed, options.fit);
  if (!reference.ok()) return reference.status();
  population.reference_ratings = std::move(*reference);
  return population;
}

absl::Status CheckOptions(const ReliabilityOptions& options, int population,
                          const char* unit) {
  if (options.grid.empty()) {
    return InvalidError(errc::kInvalidArgument, "empty grid");
  }
  for (std::size_t i = 0; i < options.grid.size(); ++i) {
    if (options.grid[i] < 1 || options.grid[i] > population) {
      return InvalidError(
          errc::kInvalidArgument,
          absl::StrCat("grid value ", options.grid[i], " outside [1, ",
                       population, "] distinct ", unit));
    }
    if (i > 0 && options.grid[i] <= options.grid[i - 1]) {
      return InvalidError(errc::kInvalidArgument,
                          "grid must be strictly increasing");
    }
  }
  if (options.trials < 1 || options.bootstrap_replicates < 1 ||
      options.max_attempts < 1) {
    return InvalidError(errc::kInvalidArgument,
                        "trials, replicates and attempts must be >= 1");
  }
  return absl::OkStatus();
}

// k distinct indices out of n, in increasing order.
std::vector<int> SampleWithoutReplacement(Rng& rng, int n, int k) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(UniformIndex(rng, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

bt::IndexedLog Subset(const bt::IndexedLog& full,
                      const std::vector<char>& keep_rater,
                      const std::vector<char>* keep_sentence) {
  bt::IndexedLog sub;
  sub.systems = full.systems;
  sub.num_raters = full.num_raters;
  sub.num_sentences = full.num_sentences;
  for (const bt::PairOutcome& o : full.outcomes) {
    if (!keep_rater[o.rater]) continue;
    if (keep_sentence != nullptr && !(*keep_sentence)[o.sentence]) continue;
    sub.outcomes.push_back(o);
  }
  return sub;
}

// Fits, correlates and bootstraps one subsample. A non-ok status with a
// non_identifiable, undefined_correlation or degenerate_bootstrap code asks
// for a redraw.
absl::StatusOr<std::pair<double, double>> Evaluate(
    const bt::IndexedLog& sub, std::span<const double> reference,
    const ReliabilityOptions& options) {
  if (sub.outcomes.empty()) {
    return PreconditionError(errc::kNonIdentifiable, "empty subsample");
  }
  auto ratings = FitRatings(sub, options.fit);
  if (!ratings.ok()) return ratings.status();
  auto rho = SpearmanRho(*ratings, reference);
  if (!rho.ok()) return rho.status();
  bt::BootstrapOptions bootstrap;
  bootstrap.replicates = options.bootstrap_replicates;
  bootstrap.level = options.level;
  bootstrap.seed = options.seed;
  bootstrap.fit = options.fit;
  auto cis = bt::BootstrapSerial(sub, bootstrap);
  if (!cis.ok()) return cis.status();
  double width = 0.0;
  for (std::size_t i = 0; i < cis->lower.size(); ++i) {
    width += cis->upper[i] - cis->lower[i];
  }
  return std::make_pair(*rho, width / static_cast<double>(cis->lower.size()));
}

bool IsRedraw(const absl::Status& status) {
  const std::string code = ErrorCodeOf(status);
  return code == errc::kNonIdentifiable || code == errc::kUndefinedCorrelation ||
         code == errc::kDegenerateBootstrap;
}

std::uint64_t TrialStream(CurveMode mode, int grid_index) {
  return (static_cast<std::uint64_t>(mode) << 32) |
         static_cast<std::uint64_t>(grid_index);
}

std::uint64_t TrialCounter(int trial, int attempt) {
  return (static_cast<std::uint64_t>(trial) << 20) |
         static_cast<std::uint64_t>(attempt);
}

TrialResult RaterTrial(const Population& population,
                       const ReliabilityOptions& options, int grid_index,
                       int trial) {
  TrialResult result;
  const bt::IndexedLog& full = population.indexed;
  const int n = options.grid[grid_index];
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    Rng rng(DeriveSeed(options.seed, TrialStream(CurveMode::kRaters, grid_index),
                       TrialCounter(trial, attempt)));
    std::vector<char> keep(full.num_raters, 0);
    for (int r : SampleWithoutReplacement(rng, full.num_raters, n)) keep[r] = 1;
    auto evaluated =
        Evaluate(Subset(full, keep, nullptr), population.reference_ratings, options);
    if (evaluated.ok()) {
      result.rho = evaluated->first;
      result.width = evaluated->second;
      return result;
    }
    if (!IsRedraw(evaluated.status())) {
      result.status = evaluated.status();
      return result;
    }
    ++result.redraws;
  }
  result.status = PreconditionError(
      errc::kNonIdentifiable,
      absl::StrCat("subsample of ", n, " raters stayed non-identifiable after ",
                   options.max_attempts, " draws"));
  return result;
}

TrialResult SentenceTrial(const Population& population,
                          const ReliabilityOptions& options, int grid_index,
                          int trial) {
  TrialResult result;
  const bt::IndexedLog& full = population.indexed;
  const int n = options.grid[grid_index];
  const int fixed = std::min(options.fixed_raters, full.num_raters);
  const int num_languages = static_cast<int>(population.languages.size());

  std::vector<std::vector<int>> by_language(num_languages);
  for (int s = 0; s < full.num_sentences; ++s) {
    by_language[population.sentence_language[s]].push_back(s);
  }
  std::vector<int> available(num_languages);
  for (int l = 0; l < num_languages; ++l) {
    available[l] = static_cast<int>(by_language[l].size());
  }

  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    Rng rng(DeriveSeed(options.seed,
                       TrialStream(CurveMode::kSentences, grid_index),
                       TrialCounter(trial, attempt)));
    std::vector<char> keep_rater(full.num_raters, 0);
    for (int r : SampleWithoutReplacement(rng, full.num_raters, fixed)) {
      keep_rater[r] = 1;
    }
    std::vector<int> order(num_languages);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::vector<int> quotas = StratifiedQuotas(available, order, n);
    std::vector<char> keep_sentence(full.num_sentences, 0);
    for (int l = 0; l < num_languages; ++l) {
      for (int i : SampleWithoutReplacement(rng, available[l], quotas[l])) {
        keep_sentence[by_language[l][i]] = 1;
      }
    }

    std::vector<double> reference = population.reference_ratings;
    if (options.reference == Reference::kFixedRaters) {
      auto fixed_fit =
          FitRatings(Subset(full, keep_rater, nullptr), options.fit);
      if (!fixed_fit.ok()) {
        if (!IsRedraw(fixed_fit.status())) {
          result.status = fixed_fit.status();
          return result;
        }
        ++result.redraws;
        continue;
      }
      reference = std::move(*fixed_fit);
    }
    auto evaluated =
        Evaluate(Subset(full, keep_rater, &keep_sentence), reference, options);
    if (evaluated.ok()) {
      result.rho = evaluated->first;
      result.width = evaluated->second;
      return result;
    }
    if (!IsRedraw(evaluated.status())) {
      result.status = evaluated.status();
      return result;
    }
    ++result.redraws;
  }
  result.status = PreconditionError(
      errc::kNonIdentifiable,
      absl::StrCat("subsample of ", n, " sentences stayed non-identifiable after ",
                   options.max_attempts, " draws"));
  return result;
}

using TrialFn = TrialResult (*)(const Population&, const ReliabilityOptions&,
                                int, int);

absl::StatusOr<ReliabilityCurve> Assemble(const Population& population,
                                          const ReliabilityOptions& options,
                                          CurveMode mode,
                                          const std::vector<TrialResult>& trials) {
  ReliabilityCurve curve;
  curve.mode = mode;
  curve.reference = options.reference;
  if (mode == CurveMode::kSentences) {
    curve.fixed_raters =
        std::min(options.fixed_raters, population.indexed.num_raters);
  }
  curve.systems = population.indexed.systems;
  curve.reference_ratings = population.reference_ratings;
  const int t_count = options.trials;
  for (std::size_t g = 0; g < options.grid.size(); ++g) {
    ReliabilityPoint point;
    point.axis_value = options.grid[g];
    point.n_systems = static_cast<int>(population.indexed.systems.size());
    point.trials = t_count;
    point.replicates = options.bootstrap_replicates;
    double rho_sum = 0.0, width_sum = 0.0;
    for (int t = 0; t < t_count; ++t) {
      const TrialResult& r = trials[g * t_count + t];
      if (!r.status.ok()) return r.status;
      rho_sum += r.rho;
      width_sum += r.width;
      point.redraws += r.redraws;
    }
    point.mean_rho = rho_sum / t_count;
    point.mean_ci_width = width_sum / t_count;
    if (t_count > 1) {
      double ss = 0.0;
      for (int t = 0; t < t_count; ++t) {
        const double d = trials[g * t_count + t].rho - point.mean_rho;
        ss += d * d;
      }
      point.rho_std = std::sqrt(ss / (t_count - 1));
    }
    curve.grid.push_back(point);
  }
  return curve;
}

absl::StatusOr<ReliabilityCurve> RunCurve(std::span<const ComparisonRecord> log,
                                          const ReliabilityOptions& options,
                                          CurveMode mode, bool parallel) {
  auto population = BuildPopulation(log, options);
  if (!population.ok()) return population.status();
  if (mode == CurveMode::kRaters) {
    if (options.reference != Reference::kFullData) {
      return InvalidError(errc::kInvalidArgument,
                          "rater curves always use the full-data reference");
    }
    if (auto s = CheckOptions(options, population->indexed.num_raters, "raters");
        !s.ok()) {
      return s;
    }
  } else {
    if (auto s = CheckOptions(options, population->indexed.num_sentences,
                              "sentences");
        !s.ok()) {
      return s;
    }
    if (options.fixed_raters < 1) {
      return InvalidError(errc::kInvalidArgument, "fixed_raters must be >= 1");
    }
  }
  const TrialFn fn = mode == CurveMode::kRaters ? RaterTrial : SentenceTrial;
  const int jobs = static_cast<int>(options.grid.size()) * options.trials;
  std::vector<TrialResult> results(jobs);
  if (parallel) {
    const int threads =
        options.num_threads > 0 ? options.num_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int job = 0; job < jobs; ++job) {
      results[job] =
          fn(*population, options, job / options.trials, job % options.trials);
    }
  } else {
    for (int job = 0; job < jobs; ++job) {
      results[job] =
          fn(*population, options, job / options.trials, job % options.trials);
    }
  }
  return Assemble(*population, options, mode, results);
}

}  // namespace

std::vector<int> StratifiedQuotas(std::span<const int> available,
                                  std::span<const int> order, int total) {
  // Water-filling: languages too small for an even share take everything they
  // have, the rest split what remains evenly with the remainder going to the
  // earliest languages in `order`.
  const int n = static_cast<int>(available.size());
  std::vector<int> quotas(n, 0);
  std::vector<char> capped(n, 0);
  int remaining = std::min(
      total, std::accumulate(available.begin(), available.end(), 0));
  int open = n;
  bool changed = true;
  while (changed && open > 0) {
    changed = false;
    const int share = remaining / open;
    for (int l = 0; l < n; ++l) {
      if (!capped[l] && available[l] <= share) {
        quotas[l] = available[l];
        remaining -= available[l];
        capped[l] = 1;
        --open;
        changed = true;
      }
    }
  }
  if (open == 0) return quotas;
  const int share = remaining / open;
  int extra = remaining % open;
  for (int l = 0; l < n; ++l) {
    if (!capped[l]) quotas[l] = share;
  }
  for (int i = 0; i < n && extra > 0; ++i) {
    if (!capped[order[i]]) {
      ++quotas[order[i]];
      --extra;
    }
  }
  return quotas;
}

absl::StatusOr<ReliabilityCurve> RaterSubsampleCurveSerial(
    std::span<const ComparisonRecord> log, const ReliabilityOptions& options) {
  return RunCurve(log, options, CurveMode::kRaters, false);
}

absl::StatusOr<ReliabilityCurve> RaterSubsampleCurve(
    std::span<const ComparisonRecord> log, const ReliabilityOptions& options) {
  return RunCurve(log, options, CurveMode::kRaters, true);
}

absl::StatusOr<ReliabilityCurve> SentenceSubsampleCurveSerial(
    std::span<const ComparisonRecord> log, const ReliabilityOptions& options) {
  return RunCurve(log, options, CurveMode::kSentences, false);
}

absl::StatusOr<ReliabilityCurve> SentenceSubsampleCurve(
    std::span<const ComparisonRecord> log, const ReliabilityOptions& options) {
  return RunCurve(log, options, CurveMode::kSentences, true);
}

std::optional<Threshold> FindThreshold(const ReliabilityCurve& curve,
                                       double target_rho) {
  for (const ReliabilityPoint& point : curve.grid) {
    if (point.mean_rho >= target_rho) {
      return Threshold{point.axis_value, point.mean_ci_width};
    }
  }
  return std::nullopt;
}

std::string CurveToCsv(const ReliabilityCurve& curve) {
  std::string out = "axis_value,n_systems,mean_rho,rho_std,mean_ci_width,trials\n";
  for (const ReliabilityPoint& p : curve.grid) {
    absl::StrAppendFormat(&out, "%d,%d,%.6f,%.6f,%.6f,%d\n", p.axis_value,
                          p.n_systems, p.mean_rho, p.rho_std, p.mean_ci_width,
                          p.trials);
  }
  return out;
}

nlohmann::ordered_json CurveToJson(const ReliabilityCurve& curve) {
  nlohmann::ordered_json json;
  json["mode"] = curve.mode == CurveMode::kRaters ? "raters" : "sentences";
  if (curve.fixed_raters) json["fixed_raters"] = *curve.fixed_raters;
  json["reference"] =
      curve.reference == Reference::kFullData ? "full_data" : "fixed_raters";
  nlohmann::ordered_json reference = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < curve.systems.size(); ++i) {
    reference.push_back({{"system_id", curve.systems[i]},
                         {"rating", curve.reference_ratings[i]}});
  }
  json["reference_leaderboard"] = std::move(reference);
  nlohmann::ordered_json grid = nlohmann::ordered_json::array();
  for (const ReliabilityPoint& p : curve.grid) {
    grid.push_back({{"axis_value", p.axis_value},
                    {"n_systems", p.n_systems},
                    {"mean_rho", p.mean_rho},
                    {"rho_std", p.rho_std},
                    {"mean_ci_width", p.mean_ci_width},
                    {"trials", p.trials},
                    {"replicates", p.replicates},
                    {"redraws", p.redraws}});
  }
  json["grid"] = std::move(grid);
  return json;
}

}  // namespace prefeval::reliability
