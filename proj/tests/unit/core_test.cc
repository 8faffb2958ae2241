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

#include "prefeval/core/validate.h"

#include <string>

#include "gtest/gtest.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/types.h"
#include "tests/unit/fixtures.h"

namespace prefeval {
namespace {

using ::prefeval::testing::Lang;
using ::prefeval::testing::MakeRecord;
using ::prefeval::testing::SmallManifest;
using ::prefeval::testing::SmallRegistry;

TEST(TokensTest, ClosedVocabulariesRoundTrip) {
  for (Choice choice : kAllChoices) {
    EXPECT_EQ(*ParseChoice(ToString(choice)), choice);
  }
  for (AxisId axis : kAllAxes) {
    EXPECT_EQ(*ParseAxisId(ToString(axis)), axis);
  }
  EXPECT_EQ(ToString(AxisId::kVoiceQuality), "voice_quality");
  EXPECT_EQ(ToString(Choice::kBothGood), "BothGood");
}

TEST(TokensTest, OutOfVocabularyTokensAreRejected) {
  EXPECT_EQ(ErrorCodeOf(ParseChoice("Maybe").status()), errc::kInvalidToken);
  EXPECT_FALSE(ParseChoice("a").ok());
  EXPECT_FALSE(ParseAxisId("pitch").ok());
  EXPECT_FALSE(ParseSubset("mixed").ok());
  EXPECT_FALSE(LanguageCode::Parse("eng").ok());
  EXPECT_FALSE(LanguageCode::Parse("HIN").ok());
  EXPECT_EQ(LanguageCode::All().size(), 10u);
}

TEST(TokensTest, TimestampsKeepMilliseconds) {
  const absl::Time t = absl::FromUnixMillis(1767225612345);
  EXPECT_EQ(FormatTimestamp(t), "2026-01-01T00:00:12.345Z");
  EXPECT_EQ(*ParseTimestamp("2026-01-01T00:00:12.345Z"), t);
  EXPECT_FALSE(ParseTimestamp("2026-01-01T00:00:12.345+01:00").ok());
  EXPECT_FALSE(ParseTimestamp("yesterday").ok());
}

TEST(MirrorTest, MirroringTwiceIsIdentity) {
  ComparisonRecord record = MakeRecord("r1", "sys_a", "sys_b", Choice::kA);
  record.axes[AxisId::kNoise] = Choice::kBothBad;
  const ComparisonRecord mirrored = MirrorRecord(record);
  EXPECT_EQ(mirrored.system_a, "sys_b");
  EXPECT_EQ(mirrored.overall, Choice::kB);
  EXPECT_EQ(mirrored.axes.at(AxisId::kNoise), Choice::kBothBad);
  EXPECT_EQ(MirrorRecord(mirrored), record);
}

TEST(RegistryTest, BuildsIndexes) {
  const Registry registry = SmallRegistry();
  EXPECT_NE(registry.FindSystem("sys_a"), nullptr);
  EXPECT_EQ(registry.FindVoice("sys_b_m")->system_id, "sys_b");
  EXPECT_EQ(registry.SentencesFor(Lang("tam")).size(), 6u);
  EXPECT_EQ(registry.FindSystem("nope"), nullptr);
}

TEST(RegistryTest, RejectsBrokenManifests) {
  BenchmarkManifest m = SmallManifest();
  m.systems[1].voices.clear();
  EXPECT_EQ(ErrorCodeOf(Registry::Build(m).status()),
            errc::kSystemWithoutVoices);

  m = SmallManifest();
  m.sentences[3].id = m.sentences[0].id;
  EXPECT_EQ(ErrorCodeOf(Registry::Build(m).status()), errc::kDuplicateId);

  m = SmallManifest();
  m.systems[0].voices[0].system_id = "ghost";
  EXPECT_EQ(ErrorCodeOf(Registry::Build(m).status()),
            errc::kDanglingReference);

  m = SmallManifest();
  m.systems[2].voices[0].languages.insert(Lang("tam"));
  EXPECT_EQ(ErrorCodeOf(Registry::Build(m).status()),
            errc::kUnsupportedLanguage);

  m = SmallManifest();
  m.languages.push_back(Lang("urd"));
  EXPECT_FALSE(Registry::Build(m).ok()) << "urd has no sentences";
}

TEST(ValidateRecordTest, WellFormedRecordIsReturnedUnchanged) {
  const Registry registry = SmallRegistry();
  const ComparisonRecord record = MakeRecord("r1", "sys_a", "sys_b", Choice::kA);
  auto validated = ValidateRecord(record, registry);
  ASSERT_TRUE(validated.ok()) << validated.status();
  EXPECT_EQ(*validated, record);
  // Idempotent.
  EXPECT_EQ(*ValidateRecord(*validated, registry), record);
}

TEST(ValidateRecordTest, EachInvariantHasItsOwnError) {
  const Registry registry = SmallRegistry();
  const ComparisonRecord good = MakeRecord("r1", "sys_a", "sys_b", Choice::kA);

  ComparisonRecord r = good;
  r.axes.erase(AxisId::kNoise);
  EXPECT_EQ(ErrorCodeOf(ValidateRecord(r, registry).status()),
            errc::kIncompleteAxes);

  r = good;
  r.voice_a = "sys_a_m";
  EXPECT_EQ(ErrorCodeOf(ValidateRecord(r, registry).status()),
            errc::kGenderMismatch);

  r = good;
  r.system_b = "sys_a";
  r.voice_b = "sys_a_m";
  r.voice_a = "sys_a_m";
  EXPECT_EQ(ErrorCodeOf(ValidateRecord(r, registry).status()),
            errc::kSelfComparison);

  r = good;
  r.sentence_id = "missing";
  EXPECT_EQ(ErrorCodeOf(ValidateRecord(r, registry).status()),
            errc::kUnknownReference);

  r = good;
  r.rater_id = "stranger";
  EXPECT_EQ(ErrorCodeOf(ValidateRecord(r, registry).status()),
            errc::kUnknownReference);

  r = MakeRecord("r2", "sys_a", "sys_c", Choice::kB, "tam_s1");
  EXPECT_EQ(ErrorCodeOf(ValidateRecord(r, registry).status()),
            errc::kUnsupportedLanguage);

  r = good;
  r.t_phase2 = r.t_phase1 - absl::Milliseconds(1);
  EXPECT_EQ(ErrorCodeOf(ValidateRecord(r, registry).status()),
            errc::kTimestampOrder);

  r = good;
  r.subset = Subset::kCodemixed;
  EXPECT_EQ(ErrorCodeOf(ValidateRecord(r, registry).status()),
            errc::kAttributeMismatch);
}

}  // namespace
}  // namespace prefeval
