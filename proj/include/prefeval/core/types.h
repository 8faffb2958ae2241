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

#ifndef PREFEVAL_CORE_TYPES_H_
#define PREFEVAL_CORE_TYPES_H_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"

namespace prefeval {

// ISO-639-2 code of one of the ten benchmark languages.
// A default-constructed code is empty and fails every validation.
class LanguageCode {
 public:
  LanguageCode() = default;

  // The closed benchmark vocabulary, in canonical order.
  static const std::array<absl::string_view, 10>& All();

  static absl::StatusOr<LanguageCode> Parse(absl::string_view code);

  const std::string& code() const { return code_; }

  friend bool operator==(const LanguageCode&, const LanguageCode&) = default;
  friend auto operator<=>(const LanguageCode&, const LanguageCode&) = default;

 private:
  explicit LanguageCode(std::string code) : code_(std::move(code)) {}
  std::string code_;
};

enum class Choice : std::uint8_t { kA, kB, kBothGood, kBothBad };

inline constexpr std::array<Choice, 4> kAllChoices = {
    Choice::kA, Choice::kB, Choice::kBothGood, Choice::kBothBad};

// Perceptual axes in their fixed feature order.
enum class AxisId : std::uint8_t {
  kIntelligibility,
  kExpressiveness,
  kVoiceQuality,
  kLiveliness,
  kHallucinations,
  kNoise,
};

inline constexpr int kNumAxes = 6;
inline constexpr std::array<AxisId, kNumAxes> kAllAxes = {
    AxisId::kIntelligibility, AxisId::kExpressiveness, AxisId::kVoiceQuality,
    AxisId::kLiveliness,      AxisId::kHallucinations, AxisId::kNoise};

enum class Subset : std::uint8_t { kNormalized, kSymbolic, kCodemixed };
inline constexpr std::array<Subset, 3> kAllSubsets = {
    Subset::kNormalized, Subset::kSymbolic, Subset::kCodemixed};

enum class LengthClass : std::uint8_t { kShort, kMedium, kLong };
enum class Gender : std::uint8_t { kMale, kFemale };
enum class AgeBand : std::uint8_t { k18To25, k25To40, k40To65 };

enum class RaterState : std::uint8_t {
  kRegistered,
  kScreeningPassed,
  kJustificationPassed,
  kTrained,
  kActive,
  kRejected,
};

// Token conversions. Parsing rejects anything outside the closed vocabulary.
absl::string_view ToString(Choice value);
absl::string_view ToString(AxisId value);
absl::string_view ToString(Subset value);
absl::string_view ToString(LengthClass value);
absl::string_view ToString(Gender value);
absl::string_view ToString(AgeBand value);
absl::string_view ToString(RaterState value);

absl::StatusOr<Choice> ParseChoice(absl::string_view token);
absl::StatusOr<AxisId> ParseAxisId(absl::string_view token);
absl::StatusOr<Subset> ParseSubset(absl::string_view token);
absl::StatusOr<LengthClass> ParseLengthClass(absl::string_view token);
absl::StatusOr<Gender> ParseGender(absl::string_view token);
absl::StatusOr<AgeBand> ParseAgeBand(absl::string_view token);
absl::StatusOr<RaterState> ParseRaterState(absl::string_view token);

// Mirrors a choice to the other slot's perspective (A <-> B, ties unchanged).
Choice MirrorChoice(Choice choice);

inline bool IsTie(Choice choice) {
  return choice == Choice::kBothGood || choice == Choice::kBothBad;
}

struct SentenceEntry {
  std::string id;
  LanguageCode language;
  std::string domain;
  Subset subset = Subset::kNormalized;
  LengthClass length_class = LengthClass::kShort;
  std::string text;

  friend bool operator==(const SentenceEntry&, const SentenceEntry&) = default;
};

struct VoiceEntry {
  std::string id;
  std::string system_id;
  Gender gender = Gender::kFemale;
  std::set<LanguageCode> languages;

  friend bool operator==(const VoiceEntry&, const VoiceEntry&) = default;
};

struct SystemEntry {
  std::string id;
  std::string display_name;
  std::set<LanguageCode> supported_languages;
  std::vector<VoiceEntry> voices;

  friend bool operator==(const SystemEntry&, const SystemEntry&) = default;
};

inline constexpr int kDefaultRaterQuota = 150;

struct RaterEntry {
  std::string id;
  RaterState state = RaterState::kRegistered;
  Gender gender = Gender::kFemale;
  AgeBand age_band = AgeBand::k18To25;
  std::string region;
  std::set<LanguageCode> languages;
  int quota_total = kDefaultRaterQuota;
  int quota_completed = 0;

  friend bool operator==(const RaterEntry&, const RaterEntry&) = default;
};

// One rater's two-phase judgment of an (A, B) pair on one sentence. `axes` is
// a map so that incomplete judgments are representable and rejected by
// validation rather than by construction.
struct ComparisonRecord {
  std::string id;
  std::string sentence_id;
  LanguageCode language;
  std::string domain;
  Subset subset = Subset::kNormalized;
  std::string system_a;
  std::string system_b;
  std::string voice_a;
  std::string voice_b;
  std::string rater_id;
  Choice overall = Choice::kA;
  std::map<AxisId, Choice> axes;
  absl::Time t_phase1;
  absl::Time t_phase2;

  friend bool operator==(const ComparisonRecord&,
                         const ComparisonRecord&) = default;
};

// Returns the record seen from the other side: systems, voices and every
// choice mirrored. The id and timestamps are kept.
ComparisonRecord MirrorRecord(const ComparisonRecord& record);

// ISO-8601 UTC with millisecond precision, e.g. 2026-03-01T12:00:00.250Z.
std::string FormatTimestamp(absl::Time time);
absl::StatusOr<absl::Time> ParseTimestamp(absl::string_view text);

}  // namespace prefeval

#endif  // PREFEVAL_CORE_TYPES_H_
