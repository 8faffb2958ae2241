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

#include "prefeval/bt/leaderboard.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "prefeval/bt/bt_fit.h"
#include "prefeval/bt/elo.h"
#include "prefeval/bt/ranks.h"
#include "prefeval/bt/win_matrix.h"
#include "prefeval/bt/win_rates.h"
#include "prefeval/core/errors.h"

namespace prefeval::bt {
namespace {

std::string DisplayName(const std::string& id, const Registry* registry) {
  if (registry == nullptr) return id;
  const SystemEntry* system = registry->FindSystem(id);
  return system == nullptr || system->display_name.empty() ? id
                                                           : system->display_name;
}

std::map<std::string, std::set<std::string>> LanguagesBySystem(
    std::span<const ComparisonRecord> log, const SubgroupFilter& filter) {
  std::map<std::string, std::set<std::string>> languages;
  for (const ComparisonRecord& record : log) {
    if (!filter.Matches(record)) continue;
    languages[record.system_a].insert(record.language.code());
    languages[record.system_b].insert(record.language.code());
  }
  return languages;
}

// 46023 -> "46,023".
std::string WithThousands(int value) {
  std::string digits = absl::StrCat(value);
  std::string out;
  const int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

}  // namespace

std::map<std::string, int> ComparisonCounts(std::span<const ComparisonRecord> log,
                                            const SubgroupFilter& filter) {
  std::map<std::string, int> counts;
  for (const ComparisonRecord& record : log) {
    if (!filter.Matches(record)) continue;
    ++counts[record.system_a];
    ++counts[record.system_b];
  }
  return counts;
}

absl::StatusOr<Leaderboard> BuildLeaderboard(std::span<const ComparisonRecord> log,
                                             const SubgroupFilter& filter,
                                             const LeaderboardConfig& config) {
  auto indexed = IndexLog(log, filter);
  if (!indexed.ok()) return indexed.status();
  const int n = static_cast<int>(indexed->systems.size());

  Eigen::MatrixXd wins = Eigen::MatrixXd::Zero(n, n);
  AccumulateWins(indexed->outcomes, {}, wins);
  const WinMatrix matrix = WinMatrixFromWins(indexed->systems, std::move(wins));
  auto strengths = FitBradleyTerry(matrix, config.bootstrap.fit);
  if (!strengths.ok()) {
    if (ErrorCodeOf(strengths.status()) != errc::kNonIdentifiable) {
      return strengths.status();
    }
    std::vector<std::string> counts;
    for (const auto& [id, count] : ComparisonCounts(log, filter)) {
      counts.push_back(absl::StrCat(id, "=", count));
    }
    return PreconditionError(
        errc::kNonIdentifiable,
        absl::StrCat(strengths.status().message(), "; comparisons: ",
                     absl::StrJoin(counts, ", ")));
  }
  const std::vector<double> ratings = MapToElo(*strengths);

  auto bootstrap = BootstrapParallel(*indexed, config.bootstrap);
  if (!bootstrap.ok()) return bootstrap.status();
  auto rates = WinRates(log, filter);
  if (!rates.ok()) return rates.status();

  Leaderboard board;
  board.filter = filter;
  board.seed = config.bootstrap.seed;
  board.replicates = bootstrap->replicates;
  board.redraws = bootstrap->redraws;
  board.log_size = log.size();
  board.n_records = indexed->outcomes.size();

  const auto languages = LanguagesBySystem(log, filter);
  std::vector<RatingInterval> intervals(n);
  for (int i = 0; i < n; ++i) {
    LeaderboardEntry entry;
    entry.system_id = indexed->systems[i];
    entry.rating = ratings[i];
    entry.ci_lower = std::min(bootstrap->lower[i], ratings[i]);
    entry.ci_upper = std::max(bootstrap->upper[i], ratings[i]);
    entry.ci_halfwidth = (entry.ci_upper - entry.ci_lower) / 2.0;
    // WinRates is sorted by id, as are the indexed systems.
    entry.win_rate_pct = (*rates)[i].win_rate_pct;
    entry.n_comparisons = (*rates)[i].n_comparisons;
    entry.n_languages =
        static_cast<int>(languages.at(entry.system_id).size());
    intervals[i] = {entry.rating, entry.ci_lower, entry.ci_upper};
    board.entries.push_back(std::move(entry));
  }
  const std::vector<int> ranks = SignificanceRanks(intervals);
  for (int i = 0; i < n; ++i) board.entries[i].rank = ranks[i];
  std::sort(board.entries.begin(), board.entries.end(),
            [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
              if (a.rating != b.rating) return a.rating > b.rating;
              return a.system_id < b.system_id;
            });
  return board;
}

nlohmann::ordered_json LeaderboardToJson(const Leaderboard& board,
                                         const Registry* registry) {
  nlohmann::ordered_json json;
  json["filter"] = board.filter.Key();
  json["seed"] = board.seed;
  json["replicates"] = board.replicates;
  json["redraws"] = board.redraws;
  json["log_size"] = board.log_size;
  json["n_records"] = board.n_records;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const LeaderboardEntry& entry : board.entries) {
    nlohmann::ordered_json row;
    row["rank"] = entry.rank;
    row["system_id"] = entry.system_id;
    row["display_name"] = DisplayName(entry.system_id, registry);
    row["rating"] = entry.rating;
    row["ci_lower"] = entry.ci_lower;
    row["ci_upper"] = entry.ci_upper;
    row["ci_halfwidth"] = entry.ci_halfwidth;
    row["n_comparisons"] = entry.n_comparisons;
    row["win_rate_pct"] = entry.win_rate_pct;
    row["n_languages"] = entry.n_languages;
    entries.push_back(std::move(row));
  }
  json["entries"] = std::move(entries);
  return json;
}

std::string LeaderboardToTable(const Leaderboard& board,
                               const Registry* registry) {
  std::vector<std::array<std::string, 6>> rows;
  rows.push_back({"Rank", "Model", "Score ± 95% CI", "# comp", "Win Rate",
                  "# lang"});
  for (const LeaderboardEntry& entry : board.entries) {
    rows.push_back({absl::StrCat(entry.rank),
                    DisplayName(entry.system_id, registry),
                    absl::StrFormat("%.2f ± %.0f", entry.rating,
                                    entry.ci_halfwidth),
                    WithThousands(entry.n_comparisons),
                    absl::StrFormat("%.0f", entry.win_rate_pct),
                    absl::StrCat(entry.n_languages)});
  }
  // Column widths in code points; "±" is two bytes in UTF-8.
  auto width = [](const std::string& s) {
    return static_cast<int>(std::count_if(
        s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
  };
  std::array<int, 6> widths{};
  for (const auto& row : rows) {
    for (int c = 0; c < 6; ++c) widths[c] = std::max(widths[c], width(row[c]));
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (int c = 0; c < 6; ++c) {
      const int pad = widths[c] - width(row[c]);
      if (c > 0) line += "  ";
      // Model is left-aligned, numbers right-aligned.
      if (c == 1) {
        line += row[c] + std::string(pad, ' ');
      } else {
        line += std::string(pad, ' ') + row[c];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string LeaderboardToCsv(const Leaderboard& board,
                             const Registry* registry) {
  std::string out =
      "rank,system_id,display_name,rating,ci_lower,ci_upper,ci_halfwidth,"
      "n_comparisons,win_rate_pct,n_languages\n";
  for (const LeaderboardEntry& entry : board.entries) {
    absl::StrAppend(&out, entry.rank, ",", entry.system_id, ",",
                    DisplayName(entry.system_id, registry), ",",
                    absl::StrFormat("%.6f,%.6f,%.6f,%.6f", entry.rating,
                                    entry.ci_lower, entry.ci_upper,
                                    entry.ci_halfwidth),
                    ",", entry.n_comparisons, ",",
                    absl::StrFormat("%.4f", entry.win_rate_pct), ",",
                    absl::StrCat(entry.n_languages), "\n");
  }
  return out;
}

}  // namespace prefeval::bt
