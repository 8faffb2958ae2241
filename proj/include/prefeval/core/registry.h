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

#ifndef PREFEVAL_CORE_REGISTRY_H_
#define PREFEVAL_CORE_REGISTRY_H_

#include <string>
#include "absl/strings/string_view.h"
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"
#include "prefeval/core/types.h"

namespace prefeval {

// Benchmark contents as declared in manifest.json. Domain and subset
// vocabularies are data, not code.
struct BenchmarkManifest {
  std::vector<LanguageCode> languages;
  std::vector<std::string> domains;
  std::vector<Subset> subsets;
  std::vector<SentenceEntry> sentences;
  std::vector<SystemEntry> systems;
  // Optional rater roster, used by the scheduler and the service.
  std::vector<RaterEntry> raters;
  // Optional audio location pattern with {system}, {voice} and {sentence}
  // placeholders.
  std::string audio_uri_template;

  friend bool operator==(const BenchmarkManifest&,
                         const BenchmarkManifest&) = default;
};

// A validated manifest with id lookups. Immutable once built.
class Registry {
 public:
  // Checks every manifest invariant and resolves cross references.
  static absl::StatusOr<Registry> Build(BenchmarkManifest manifest);

  const BenchmarkManifest& manifest() const { return manifest_; }

  const SentenceEntry* FindSentence(absl::string_view id) const;
  const SystemEntry* FindSystem(absl::string_view id) const;
  const VoiceEntry* FindVoice(absl::string_view id) const;
  const RaterEntry* FindRater(absl::string_view id) const;

  bool HasLanguage(const LanguageCode& language) const;

  // Sentence indices (into manifest().sentences) for `language`.
  const std::vector<int>& SentencesFor(const LanguageCode& language) const;

  // Sentence count per declared language, in declaration order.
  std::vector<std::pair<LanguageCode, int>> SentenceCounts() const;

  std::string AudioUri(absl::string_view system_id, absl::string_view voice_id,
                       absl::string_view sentence_id) const;

 private:
  explicit Registry(BenchmarkManifest manifest)
      : manifest_(std::move(manifest)) {}

  BenchmarkManifest manifest_;
  std::unordered_map<std::string, int> sentence_index_;
  std::unordered_map<std::string, int> system_index_;
  // Voice id -> (system index, voice index).
  std::unordered_map<std::string, std::pair<int, int>> voice_index_;
  std::unordered_map<std::string, int> rater_index_;
  std::unordered_map<std::string, std::vector<int>> sentences_by_language_;
};

}  // namespace prefeval

#endif  // PREFEVAL_CORE_REGISTRY_H_
