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

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/validate.h"
#include "prefeval/sim/simulator.h"
#include "prefeval/storage/json_codec.h"

namespace prefeval::sim {
namespace {

using storage::ManifestToJson;
using storage::RecordToLine;

// Closed-form Bradley-Terry probability on the Elo scale, written out here so
// the simulator is checked against an independent formula.
double EloWinProbability(double r_a, double r_b) {
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / 400.0));
}

// E[P(A wins)] under Gaussian Elo noise, by trapezoidal quadrature over +-8 sd.
double NoisyWinProbability(double r_a, double r_b, double sigma) {
  const int steps = 4000;
  const double lo = -8.0 * sigma, h = 16.0 * sigma / steps;
  double total = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double e = lo + i * h;
    const double density =
        std::exp(-0.5 * e * e / (sigma * sigma)) / (sigma * std::sqrt(2 * M_PI));
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    total += w * density / (1.0 + std::pow(10.0, (r_b - r_a + e) / 400.0));
  }
  return total * h;
}

double BinomialSigma(double p, int n) { return std::sqrt(p * (1 - p) / n); }

double EmpiricalAWinRate(const WorldSpec& spec, int draws, std::uint64_t seed) {
  Rng rng(seed);
  int wins = 0;
  for (int i = 0; i < draws; ++i) {
    if (DrawJudgement(spec, 0, 1, rng).overall == Choice::kA) ++wins;
  }
  return static_cast<double>(wins) / draws;
}

TEST(WorldTest, TwoSystemsHaveFourVoices) {
  WorldSpec spec;
  spec.n_systems = 2;
  auto world = GenerateWorld(spec);
  ASSERT_TRUE(world.ok()) << world.status();
  ASSERT_EQ(world->manifest.systems.size(), 2u);
  int voices = 0;
  for (const SystemEntry& system : world->manifest.systems) {
    voices += static_cast<int>(system.voices.size());
    std::set<Gender> genders;
    for (const VoiceEntry& voice : system.voices) genders.insert(voice.gender);
    EXPECT_EQ(genders.size(), 2u);
  }
  EXPECT_EQ(voices, 4);
  EXPECT_TRUE(world->log.empty());
  EXPECT_TRUE(Registry::Build(world->manifest).ok());
}

TEST(WorldTest, SentencesSplitEvenlyAcrossSubsets) {
  WorldSpec spec;
  spec.n_sentences = 12;
  spec.languages = {*LanguageCode::Parse("hin"), *LanguageCode::Parse("tam")};
  spec.domains = {"news", "finance"};
  auto world = GenerateWorld(spec);
  ASSERT_TRUE(world.ok());
  std::map<std::pair<std::string, Subset>, int> counts;
  std::map<std::string, int> domains;
  for (const SentenceEntry& s : world->manifest.sentences) {
    ++counts[{s.language.code(), s.subset}];
    ++domains[s.domain];
  }
  EXPECT_EQ(counts.size(), 6u);
  for (const auto& [key, count] : counts) EXPECT_EQ(count, 4);
  EXPECT_EQ(domains["news"], 12);
  EXPECT_EQ(domains["finance"], 12);
}

TEST(WorldTest, SameSpecGivesIdenticalManifest) {
  WorldSpec spec;
  spec.n_systems = 4;
  spec.seed = 99;
  auto first = GenerateWorld(spec);
  auto second = GenerateWorld(spec);
  EXPECT_EQ(ManifestToJson(first->manifest).dump(),
            ManifestToJson(second->manifest).dump());
}

TEST(WorldTest, IdsAndRaters) {
  EXPECT_EQ(SystemId(0, 7), "sys01");
  EXPECT_EQ(SystemId(99, 120), "sys100");
  EXPECT_EQ(SystemId(0, 120), "sys001");
  WorldSpec spec;
  spec.n_raters = 4;
  spec.quota_per_rater = 9;
  spec.languages = {*LanguageCode::Parse("ben"), *LanguageCode::Parse("mar")};
  auto world = GenerateWorld(spec);
  ASSERT_TRUE(world.ok());
  const auto& raters = world->manifest.raters;
  ASSERT_EQ(raters.size(), 4u);
  EXPECT_EQ(raters[0].languages.begin()->code(), "ben");
  EXPECT_EQ(raters[1].languages.begin()->code(), "mar");
  EXPECT_EQ(raters[2].languages.begin()->code(), "ben");
  EXPECT_EQ(raters[3].state, RaterState::kActive);
  EXPECT_EQ(raters[3].quota_total, 9);
}

TEST(SpecTest, Validation) {
  WorldSpec spec;
  EXPECT_TRUE(ValidateSpec(spec).ok());
  spec.axis_weights = {0.5, 0.5, 0.5, 0, 0, 0};
  EXPECT_EQ(ErrorCodeOf(ValidateSpec(spec)), errc::kInvalidArgument);
  spec = WorldSpec();
  spec.true_ratings = {1100, 1000, 1000, 1000, 1000, 1000, 1000};
  EXPECT_EQ(ErrorCodeOf(ValidateSpec(spec)), errc::kInvalidArgument);
  spec.true_ratings = EvenlySpacedRatings(7, 50);
  EXPECT_TRUE(ValidateSpec(spec).ok());
  spec.tie_rate = 1.0;
  EXPECT_EQ(ErrorCodeOf(ValidateSpec(spec)), errc::kInvalidArgument);
}

TEST(SpecTest, EvenlySpacedRatings) {
  EXPECT_EQ(EvenlySpacedRatings(3, 100), (std::vector<double>{1100, 1000, 900}));
  const auto r = EvenlySpacedRatings(4, 60);
  EXPECT_DOUBLE_EQ(r[0] - r[1], 60);
  EXPECT_DOUBLE_EQ((r[0] + r[1] + r[2] + r[3]) / 4, 1000);
}

TEST(SpecTest, JsonRoundTrip) {
  WorldSpec spec;
  spec.n_systems = 3;
  spec.true_ratings = {1100, 1000, 900};
  spec.axis_quality = {{0.1, 0.2, 0.3, 0.4, 0.5, 0.6},
                       {0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
                       {1, 1, 1, 0, 0, 0}};
  spec.axis_weights = {0.4, 0.3, 0.1, 0.1, 0.05, 0.05};
  spec.rater_noise = 30;
  spec.tie_rate = 0.1;
  spec.seed = 123456789012345ULL;
  auto parsed = SpecFromJson(SpecToJson(spec));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, spec);
}

TEST(SpecTest, JsonRejectsUnknownFieldsAndBadValues) {
  EXPECT_EQ(ErrorCodeOf(SpecFromJson({{"n_system", 3}}).status()),
            errc::kParseError);
  EXPECT_EQ(ErrorCodeOf(SpecFromJson({{"n_systems", "three"}}).status()),
            errc::kParseError);
  EXPECT_EQ(ErrorCodeOf(SpecFromJson({{"languages", {"xx"}}}).status()),
            errc::kInvalidToken);
  EXPECT_EQ(ErrorCodeOf(SpecFromJson({{"n_systems", 1}}).status()),
            errc::kInvalidArgument);
}

TEST(JudgementTest, EqualRatingsSplitEvenly) {
  WorldSpec spec;
  spec.n_systems = 2;
  EXPECT_NEAR(EmpiricalAWinRate(spec, 10000, 1), 0.5, 0.02);
}

TEST(JudgementTest, ThreeToOneOdds) {
  WorldSpec spec;
  spec.n_systems = 2;
  const double gap = 400.0 * std::log10(3.0);
  spec.true_ratings = {1000 + gap / 2, 1000 - gap / 2};
  EXPECT_NEAR(EloWinProbability(spec.true_ratings[0], spec.true_ratings[1]), 0.75,
              1e-12);
  EXPECT_NEAR(WinProbability(spec, 0, 1), 0.75, 1e-12);
  EXPECT_NEAR(EmpiricalAWinRate(spec, 10000, 2), 0.75, 0.02);
}

TEST(JudgementTest, NoiseMatchesQuadrature) {
  WorldSpec spec;
  spec.n_systems = 2;
  spec.true_ratings = {1150, 850};
  spec.rater_noise = 200;
  const double p = NoisyWinProbability(1150, 850, 200);
  EXPECT_LT(p, EloWinProbability(1150, 850));
  const int n = 40000;
  EXPECT_NEAR(EmpiricalAWinRate(spec, n, 3), p, 3 * BinomialSigma(p, n));
}

TEST(JudgementTest, AllTies) {
  WorldSpec spec;
  spec.n_systems = 2;
  spec.tie_rate = 1.0;  // outside a valid world spec, fine for one draw
  Rng rng(4);
  int good = 0;
  for (int i = 0; i < 1000; ++i) {
    const Choice c = DrawJudgement(spec, 0, 1, rng).overall;
    ASSERT_TRUE(c == Choice::kBothGood || c == Choice::kBothBad);
    good += c == Choice::kBothGood;
  }
  EXPECT_NEAR(good / 1000.0, 0.5, 0.06);
}

TEST(JudgementTest, AxisAgreementFollowsWeights) {
  WorldSpec spec;
  spec.n_systems = 2;
  spec.true_ratings = {1100, 900};
  spec.axis_weights = {0.4, 0.3, 0.1, 0.1, 0.05, 0.05};
  Rng rng(5);
  const int n = 20000;
  std::array<int, kNumAxes> agree{};
  for (int i = 0; i < n; ++i) {
    const Judgement j = DrawJudgement(spec, 0, 1, rng);
    ASSERT_EQ(j.axes.size(), 6u);
    for (int k = 0; k < kNumAxes; ++k) agree[k] += j.axes.at(kAllAxes[k]) == j.overall;
  }
  for (int k = 0; k < kNumAxes; ++k) {
    const double p = 1.0 / (1.0 + std::exp(-spec.axis_tilt * spec.axis_weights[k]));
    EXPECT_NEAR(agree[k] / static_cast<double>(n), p, 3 * BinomialSigma(p, n)) << k;
  }
}

TEST(JudgementTest, AxisQualityGapWithoutTilt) {
  WorldSpec spec;
  spec.n_systems = 2;
  spec.axis_weights = {1, 0, 0, 0, 0, 0};
  spec.axis_quality = {{0.9, 0.9, 0.5, 0.5, 0.5, 0.5}, {0.4, 0.4, 0.5, 0.5, 0.5, 0.5}};
  Rng rng(6);
  const int n = 20000;
  int a_on_axis1 = 0;
  for (int i = 0; i < n; ++i) {
    a_on_axis1 += DrawJudgement(spec, 0, 1, rng).axes.at(AxisId::kExpressiveness) ==
                  Choice::kA;
  }
  const double p = 1.0 / (1.0 + std::exp(-spec.axis_sharpness * 0.5));
  EXPECT_NEAR(a_on_axis1 / static_cast<double>(n), p, 3 * BinomialSigma(p, n));
}

WorldSpec RunSpec() {
  WorldSpec spec;
  spec.n_systems = 4;
  spec.true_ratings = EvenlySpacedRatings(4, 100);
  spec.n_raters = 12;
  spec.quota_per_rater = 100;
  spec.n_sentences = 60;
  spec.languages = {*LanguageCode::Parse("hin"), *LanguageCode::Parse("tel")};
  spec.seed = 21;
  return spec;
}

TEST(RunTest, RecordsAreValidAndQuotaBound) {
  const WorldSpec spec = RunSpec();
  auto world = RunSimulation(spec);
  ASSERT_TRUE(world.ok()) << world.status();
  EXPECT_EQ(world->log.size(), 1200u);
  auto registry = Registry::Build(world->manifest);
  ASSERT_TRUE(registry.ok());
  std::set<std::string> ids;
  std::map<std::string, int> per_rater;
  for (const ComparisonRecord& record : world->log) {
    ASSERT_TRUE(ValidateRecord(record, *registry).ok()) << record.id;
    EXPECT_LT(record.system_a, record.system_b);
    EXPECT_TRUE(ids.insert(record.id).second);
    ++per_rater[record.rater_id];
  }
  for (const auto& [rater, count] : per_rater) EXPECT_LE(count, 100);
}

TEST(RunTest, PlanTargetsStopTheRun) {
  WorldSpec spec = RunSpec();
  spec.target_per_cell = 5;
  auto world = RunSimulation(spec);
  ASSERT_TRUE(world.ok()) << world.status();
  // 2 languages x 6 pairs x 5.
  EXPECT_EQ(world->log.size(), 60u);
}

TEST(RunTest, Deterministic) {
  auto first = RunSimulation(RunSpec());
  auto second = RunSimulation(RunSpec());
  ASSERT_EQ(first->log.size(), second->log.size());
  for (std::size_t i = 0; i < first->log.size(); ++i) {
    ASSERT_EQ(RecordToLine(first->log[i]), RecordToLine(second->log[i]));
  }
  WorldSpec other = RunSpec();
  other.seed = 22;
  auto third = RunSimulation(other);
  EXPECT_NE(RecordToLine(first->log[0]) + RecordToLine(first->log[1]),
            RecordToLine(third->log[0]) + RecordToLine(third->log[1]));
}

TEST(RunTest, PairsAreEvenlyServed) {
  auto world = RunSimulation(RunSpec());
  ASSERT_TRUE(world.ok());
  std::map<std::pair<std::string, std::string>, int> counts;
  for (const ComparisonRecord& r : world->log) {
    ++counts[{r.language.code(), r.system_a + r.system_b}];
  }
  EXPECT_EQ(counts.size(), 12u);
  for (const auto& [cell, count] : counts) EXPECT_EQ(count, 100) << cell.second;
}

TEST(RunTest, WinFrequenciesWithinThreeSigma) {
  WorldSpec spec = RunSpec();
  spec.n_raters = 40;
  spec.quota_per_rater = 150;
  spec.n_sentences = 200;
  auto world = RunSimulation(spec);
  ASSERT_TRUE(world.ok());
  std::map<std::pair<std::string, std::string>, std::pair<int, int>> tallies;
  for (const ComparisonRecord& r : world->log) {
    auto& [wins, total] = tallies[{r.system_a, r.system_b}];
    wins += r.overall == Choice::kA;
    ++total;
  }
  for (const auto& [pair, tally] : tallies) {
    const int a = std::stoi(pair.first.substr(3)) - 1;
    const int b = std::stoi(pair.second.substr(3)) - 1;
    const double p = EloWinProbability(spec.true_ratings[a], spec.true_ratings[b]);
    EXPECT_NEAR(static_cast<double>(tally.first) / tally.second, p,
                3 * BinomialSigma(p, tally.second))
        << pair.first << " vs " << pair.second;
  }
}

TEST(SimulateComparisonTest, CanonicalAndValid) {
  auto world = GenerateWorld(RunSpec());
  ASSERT_TRUE(world.ok());
  auto record =
      SimulateComparison(*world, "rater0001", "hin_0003", "sys03", "sys01", 77);
  ASSERT_TRUE(record.ok()) << record.status();
  EXPECT_EQ(record->system_a, "sys01");
  EXPECT_EQ(record->system_b, "sys03");
  EXPECT_EQ(record->voice_a.back(), record->voice_b.back());
  EXPECT_EQ(record->axes.size(), 6u);
  auto again =
      SimulateComparison(*world, "rater0001", "hin_0003", "sys03", "sys01", 77);
  EXPECT_EQ(RecordToLine(*record), RecordToLine(*again));
}

TEST(SimulateComparisonTest, InadmissiblePairs) {
  auto world = GenerateWorld(RunSpec());
  ASSERT_TRUE(world.ok());
  EXPECT_EQ(ErrorCodeOf(SimulateComparison(*world, "rater0001", "hin_0000", "sys01",
                                           "sys01", 1)
                            .status()),
            errc::kSelfComparison);
  EXPECT_EQ(ErrorCodeOf(SimulateComparison(*world, "rater0001", "hin_0000", "sys01",
                                           "sys09", 1)
                            .status()),
            errc::kUnknownReference);
  // Drop Telugu from sys02.
  SystemEntry& sys02 = world->manifest.systems[1];
  sys02.supported_languages.erase(*LanguageCode::Parse("tel"));
  for (VoiceEntry& voice : sys02.voices) voice.languages = sys02.supported_languages;
  EXPECT_EQ(ErrorCodeOf(SimulateComparison(*world, "rater0001", "tel_0000", "sys01",
                                           "sys02", 1)
                            .status()),
            errc::kUnsupportedLanguage);
}

}  // namespace
}  // namespace prefeval::sim
