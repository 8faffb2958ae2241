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

#include "absl/strings/str_cat.h"
#include "prefeval/core/errors.h"

namespace prefeval {
namespace {

absl::Status Unknown(absl::string_view what, absl::string_view id) {
  return MakeError(absl::StatusCode::kNotFound, errc::kUnknownReference,
                   absl::StrCat("unknown reference: ", what, " '", id, "'"));
}

}  // namespace

absl::StatusOr<ComparisonRecord> ValidateRecord(const ComparisonRecord& record,
                                                const Registry& registry) {
  const SentenceEntry* sentence = registry.FindSentence(record.sentence_id);
  if (sentence == nullptr) return Unknown("sentence", record.sentence_id);
  const SystemEntry* system_a = registry.FindSystem(record.system_a);
  if (system_a == nullptr) return Unknown("system", record.system_a);
  const SystemEntry* system_b = registry.FindSystem(record.system_b);
  if (system_b == nullptr) return Unknown("system", record.system_b);
  const VoiceEntry* voice_a = registry.FindVoice(record.voice_a);
  if (voice_a == nullptr) return Unknown("voice", record.voice_a);
  const VoiceEntry* voice_b = registry.FindVoice(record.voice_b);
  if (voice_b == nullptr) return Unknown("voice", record.voice_b);
  if (record.rater_id.empty()) return Unknown("rater", record.rater_id);
  if (!registry.manifest().raters.empty() &&
      registry.FindRater(record.rater_id) == nullptr) {
    return Unknown("rater", record.rater_id);
  }
  if (voice_a->system_id != system_a->id || voice_b->system_id != system_b->id) {
    return InvalidError(errc::kAttributeMismatch,
                        "voice does not belong to its system");
  }

  if (record.system_a == record.system_b) {
    return InvalidError(errc::kSelfComparison,
                        absl::StrCat("self-comparison of ", record.system_a));
  }
  if (voice_a->gender != voice_b->gender) {
    return InvalidError(errc::kGenderMismatch,
                        absl::StrCat("gender mismatch between ", voice_a->id,
                                     " and ", voice_b->id));
  }
  for (const SystemEntry* system : {system_a, system_b}) {
    if (!system->supported_languages.contains(record.language)) {
      return InvalidError(errc::kUnsupportedLanguage,
                          absl::StrCat("unsupported language ",
                                       record.language.code(), " for system ",
                                       system->id));
    }
  }
  for (const VoiceEntry* voice : {voice_a, voice_b}) {
    if (!voice->languages.empty() &&
        !voice->languages.contains(record.language)) {
      return InvalidError(errc::kUnsupportedLanguage,
                          absl::StrCat("unsupported language ",
                                       record.language.code(), " for voice ",
                                       voice->id));
    }
  }
  if (record.language != sentence->language ||
      record.domain != sentence->domain || record.subset != sentence->subset) {
    return InvalidError(errc::kAttributeMismatch,
                        absl::StrCat("record attributes disagree with sentence ",
                                     sentence->id));
  }
  if (record.axes.size() != kNumAxes) {
    return InvalidError(errc::kIncompleteAxes,
                        absl::StrCat("incomplete axes: ", record.axes.size(),
                                     " of ", kNumAxes));
  }
  if (record.t_phase2 < record.t_phase1) {
    return InvalidError(errc::kTimestampOrder,
                        "timestamp order: phase 2 precedes phase 1");
  }
  return record;
}

}  // namespace prefeval
