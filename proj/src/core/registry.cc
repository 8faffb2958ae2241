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

#include "prefeval/core/registry.h"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"
#include "prefeval/core/errors.h"

namespace prefeval {

absl::StatusOr<Registry> Registry::Build(BenchmarkManifest manifest) {
  Registry registry(std::move(manifest));
  const BenchmarkManifest& m = registry.manifest_;

  if (m.languages.empty()) {
    return InvalidError(errc::kInvalidArgument, "manifest declares no languages");
  }
  std::set<LanguageCode> languages;
  for (const LanguageCode& language : m.languages) {
    if (language.code().empty()) {
      return InvalidError(errc::kInvalidToken, "empty language code");
    }
    if (!languages.insert(language).second) {
      return InvalidError(errc::kDuplicateId,
                          absl::StrCat("duplicate language ", language.code()));
    }
  }
  const std::set<std::string> domains(m.domains.begin(), m.domains.end());
  if (domains.size() != m.domains.size()) {
    return InvalidError(errc::kDuplicateId, "duplicate domain");
  }
  const std::set<Subset> subsets(m.subsets.begin(), m.subsets.end());

  for (int i = 0; i < static_cast<int>(m.sentences.size()); ++i) {
    const SentenceEntry& sentence = m.sentences[i];
    if (!registry.sentence_index_.emplace(sentence.id, i).second) {
      return InvalidError(errc::kDuplicateId,
                          absl::StrCat("duplicate sentence id ", sentence.id));
    }
    if (!languages.contains(sentence.language)) {
      return InvalidError(errc::kUnsupportedLanguage,
                          absl::StrCat("sentence ", sentence.id,
                                       " uses undeclared language '",
                                       sentence.language.code(), "'"));
    }
    if (!domains.contains(sentence.domain)) {
      return InvalidError(errc::kInvalidToken,
                          absl::StrCat("sentence ", sentence.id,
                                       " uses undeclared domain '",
                                       sentence.domain, "'"));
    }
    if (!subsets.contains(sentence.subset)) {
      return InvalidError(errc::kInvalidToken,
                          absl::StrCat("sentence ", sentence.id,
                                       " uses undeclared subset"));
    }
    if (sentence.text.empty()) {
      return InvalidError(errc::kInvalidArgument,
                          absl::StrCat("sentence ", sentence.id, " has no text"));
    }
    registry.sentences_by_language_[sentence.language.code()].push_back(i);
  }
  for (const LanguageCode& language : m.languages) {
    if (!registry.sentences_by_language_.contains(language.code())) {
      return InvalidError(errc::kInvalidArgument,
                          absl::StrCat("language ", language.code(),
                                       " has no sentences"));
    }
  }

  for (int s = 0; s < static_cast<int>(m.systems.size()); ++s) {
    const SystemEntry& system = m.systems[s];
    if (!registry.system_index_.emplace(system.id, s).second) {
      return InvalidError(errc::kDuplicateId,
                          absl::StrCat("duplicate system id ", system.id));
    }
    if (system.voices.empty()) {
      return InvalidError(errc::kSystemWithoutVoices,
                          absl::StrCat("system without voices: ", system.id));
    }
    for (const LanguageCode& language : system.supported_languages) {
      if (!languages.contains(language)) {
        return InvalidError(errc::kUnsupportedLanguage,
                            absl::StrCat("system ", system.id,
                                         " supports undeclared language ",
                                         language.code()));
      }
    }
    for (int v = 0; v < static_cast<int>(system.voices.size()); ++v) {
      const VoiceEntry& voice = system.voices[v];
      if (voice.system_id != system.id) {
        return InvalidError(errc::kDanglingReference,
                            absl::StrCat("voice ", voice.id,
                                         " references system '",
                                         voice.system_id, "' but is listed under ",
                                         system.id));
      }
      if (!std::includes(system.supported_languages.begin(),
                         system.supported_languages.end(),
                         voice.languages.begin(), voice.languages.end())) {
        return InvalidError(errc::kUnsupportedLanguage,
                            absl::StrCat("voice ", voice.id,
                                         " has languages outside system ",
                                         system.id));
      }
      if (!registry.voice_index_.emplace(voice.id, std::make_pair(s, v))
               .second) {
        return InvalidError(errc::kDuplicateId,
                            absl::StrCat("duplicate voice id ", voice.id));
      }
    }
  }

  for (int r = 0; r < static_cast<int>(m.raters.size()); ++r) {
    const RaterEntry& rater = m.raters[r];
    if (!registry.rater_index_.emplace(rater.id, r).second) {
      return InvalidError(errc::kDuplicateId,
                          absl::StrCat("duplicate rater id ", rater.id));
    }
    if (rater.quota_completed < 0 || rater.quota_total < 0 ||
        rater.quota_completed > rater.quota_total) {
      return InvalidError(errc::kInvalidArgument,
                          absl::StrCat("rater ", rater.id,
                                       " has inconsistent quota"));
    }
  }
  return registry;
}

const SentenceEntry* Registry::FindSentence(absl::string_view id) const {
  auto it = sentence_index_.find(std::string(id));
  return it == sentence_index_.end() ? nullptr
                                     : &manifest_.sentences[it->second];
}

const SystemEntry* Registry::FindSystem(absl::string_view id) const {
  auto it = system_index_.find(std::string(id));
  return it == system_index_.end() ? nullptr : &manifest_.systems[it->second];
}

const VoiceEntry* Registry::FindVoice(absl::string_view id) const {
  auto it = voice_index_.find(std::string(id));
  if (it == voice_index_.end()) return nullptr;
  return &manifest_.systems[it->second.first].voices[it->second.second];
}

const RaterEntry* Registry::FindRater(absl::string_view id) const {
  auto it = rater_index_.find(std::string(id));
  return it == rater_index_.end() ? nullptr : &manifest_.raters[it->second];
}

bool Registry::HasLanguage(const LanguageCode& language) const {
  return sentences_by_language_.contains(language.code());
}

const std::vector<int>& Registry::SentencesFor(
    const LanguageCode& language) const {
  static const std::vector<int> kEmpty;
  auto it = sentences_by_language_.find(language.code());
  return it == sentences_by_language_.end() ? kEmpty : it->second;
}

std::vector<std::pair<LanguageCode, int>> Registry::SentenceCounts() const {
  std::vector<std::pair<LanguageCode, int>> counts;
  for (const LanguageCode& language : manifest_.languages) {
    counts.emplace_back(language,
                        static_cast<int>(SentencesFor(language).size()));
  }
  return counts;
}

std::string Registry::AudioUri(absl::string_view system_id,
                               absl::string_view voice_id,
                               absl::string_view sentence_id) const {
  if (manifest_.audio_uri_template.empty()) {
    return absl::StrCat("audio://", system_id, "/", voice_id, "/", sentence_id);
  }
  return absl::StrReplaceAll(manifest_.audio_uri_template,
                             {{"{system}", system_id},
                              {"{voice}", voice_id},
                              {"{sentence}", sentence_id}});
}

}  // namespace prefeval
