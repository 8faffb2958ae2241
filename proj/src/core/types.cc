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

#include "prefeval/core/types.h"

#include <algorithm>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/time/time.h"
#include "prefeval/core/errors.h"

namespace prefeval {
namespace {

constexpr std::array<absl::string_view, 10> kLanguages = {
    "ben", "guj", "hin", "kan", "mal", "mar", "ori", "tam", "tel", "urd"};

constexpr std::array<absl::string_view, 4> kChoiceTokens = {"A", "B", "BothGood",
                                                           "BothBad"};
constexpr std::array<absl::string_view, 6> kAxisTokens = {
    "intelligibility", "expressiveness", "voice_quality",
    "liveliness",      "hallucinations", "noise"};
constexpr std::array<absl::string_view, 3> kSubsetTokens = {
    "normalized", "symbolic", "codemixed"};
constexpr std::array<absl::string_view, 3> kLengthTokens = {"short", "medium",
                                                           "long"};
constexpr std::array<absl::string_view, 2> kGenderTokens = {"male", "female"};
constexpr std::array<absl::string_view, 3> kAgeTokens = {"18-25", "25-40",
                                                        "40-65"};
constexpr std::array<absl::string_view, 6> kRaterStateTokens = {
    "registered", "screening_passed", "justification_passed",
    "trained",    "active",           "rejected"};

template <typename Enum, std::size_t N>
absl::StatusOr<Enum> ParseToken(const std::array<absl::string_view, N>& tokens,
                                absl::string_view token, absl::string_view what) {
  auto it = std::find(tokens.begin(), tokens.end(), token);
  if (it == tokens.end()) {
    return InvalidError(errc::kInvalidToken,
                        absl::StrCat("invalid ", what, " '", token, "'"));
  }
  return static_cast<Enum>(it - tokens.begin());
}

}  // namespace

const std::array<absl::string_view, 10>& LanguageCode::All() {
  return kLanguages;
}

absl::StatusOr<LanguageCode> LanguageCode::Parse(absl::string_view code) {
  if (std::find(kLanguages.begin(), kLanguages.end(), code) ==
      kLanguages.end()) {
    return InvalidError(errc::kInvalidToken,
                        absl::StrCat("invalid language '", code, "'"));
  }
  return LanguageCode(std::string(code));
}

absl::string_view ToString(Choice value) {
  return kChoiceTokens[static_cast<int>(value)];
}
absl::string_view ToString(AxisId value) {
  return kAxisTokens[static_cast<int>(value)];
}
absl::string_view ToString(Subset value) {
  return kSubsetTokens[static_cast<int>(value)];
}
absl::string_view ToString(LengthClass value) {
  return kLengthTokens[static_cast<int>(value)];
}
absl::string_view ToString(Gender value) {
  return kGenderTokens[static_cast<int>(value)];
}
absl::string_view ToString(AgeBand value) {
  return kAgeTokens[static_cast<int>(value)];
}
absl::string_view ToString(RaterState value) {
  return kRaterStateTokens[static_cast<int>(value)];
}

absl::StatusOr<Choice> ParseChoice(absl::string_view token) {
  return ParseToken<Choice>(kChoiceTokens, token, "choice");
}
absl::StatusOr<AxisId> ParseAxisId(absl::string_view token) {
  return ParseToken<AxisId>(kAxisTokens, token, "axis");
}
absl::StatusOr<Subset> ParseSubset(absl::string_view token) {
  return ParseToken<Subset>(kSubsetTokens, token, "subset");
}
absl::StatusOr<LengthClass> ParseLengthClass(absl::string_view token) {
  return ParseToken<LengthClass>(kLengthTokens, token, "length class");
}
absl::StatusOr<Gender> ParseGender(absl::string_view token) {
  return ParseToken<Gender>(kGenderTokens, token, "gender");
}
absl::StatusOr<AgeBand> ParseAgeBand(absl::string_view token) {
  return ParseToken<AgeBand>(kAgeTokens, token, "age band");
}
absl::StatusOr<RaterState> ParseRaterState(absl::string_view token) {
  return ParseToken<RaterState>(kRaterStateTokens, token, "rater state");
}

Choice MirrorChoice(Choice choice) {
  switch (choice) {
    case Choice::kA:
      return Choice::kB;
    case Choice::kB:
      return Choice::kA;
    default:
      return choice;
  }
}

ComparisonRecord MirrorRecord(const ComparisonRecord& record) {
  ComparisonRecord mirrored = record;
  std::swap(mirrored.system_a, mirrored.system_b);
  std::swap(mirrored.voice_a, mirrored.voice_b);
  mirrored.overall = MirrorChoice(record.overall);
  for (auto& [axis, choice] : mirrored.axes) choice = MirrorChoice(choice);
  return mirrored;
}

std::string FormatTimestamp(absl::Time time) {
  return absl::FormatTime("%Y-%m-%dT%H:%M:%E3SZ", time, absl::UTCTimeZone());
}

absl::StatusOr<absl::Time> ParseTimestamp(absl::string_view text) {
  absl::Time time;
  std::string error;
  if (text.empty() || text.back() != 'Z' ||
      !absl::ParseTime("%Y-%m-%dT%H:%M:%E*SZ", text, absl::UTCTimeZone(),
                       &time, &error)) {
    return InvalidError(errc::kParseError,
                        absl::StrCat("invalid timestamp '", text, "'"));
  }
  // Millisecond precision is the storage contract.
  return absl::FromUnixMillis(absl::ToUnixMillis(time));
}

}  // namespace prefeval
