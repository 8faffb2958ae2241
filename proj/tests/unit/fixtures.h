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

#ifndef PREFEVAL_TESTS_UNIT_FIXTURES_H_
#define PREFEVAL_TESTS_UNIT_FIXTURES_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "absl/time/time.h"
#include "prefeval/core/registry.h"
#include "prefeval/core/types.h"

namespace prefeval::testing {

inline LanguageCode Lang(absl::string_view code) {
  return *LanguageCode::Parse(code);
}

// Two languages (hin, tam), three systems. sys_c speaks only hin. Every
// system has one male and one female voice. 12 sentences: 6 per language,
// two per subset.
inline BenchmarkManifest SmallManifest() {
  BenchmarkManifest m;
  m.languages = {Lang("hin"), Lang("tam")};
  m.domains = {"news", "finance"};
  m.subsets = {Subset::kNormalized, Subset::kSymbolic, Subset::kCodemixed};
  for (const char* id : {"sys_a", "sys_b", "sys_c"}) {
    SystemEntry system;
    system.id = id;
    system.display_name = std::string("System ") + id;
    system.supported_languages = {Lang("hin"), Lang("tam")};
    if (system.id == "sys_c") system.supported_languages = {Lang("hin")};
    for (Gender gender : {Gender::kMale, Gender::kFemale}) {
      VoiceEntry voice;
      voice.id = system.id + (gender == Gender::kMale ? "_m" : "_f");
      voice.system_id = system.id;
      voice.gender = gender;
      voice.languages = system.supported_languages;
      system.voices.push_back(voice);
    }
    m.systems.push_back(system);
  }
  int k = 0;
  for (const char* language : {"hin", "tam"}) {
    for (int i = 0; i < 6; ++i, ++k) {
      SentenceEntry sentence;
      sentence.id = std::string(language) + "_s" + std::to_string(i);
      sentence.language = Lang(language);
      sentence.domain = i % 2 == 0 ? "news" : "finance";
      sentence.subset = kAllSubsets[i / 2];
      sentence.length_class = static_cast<LengthClass>(i % 3);
      sentence.text = "text " + sentence.id;
      m.sentences.push_back(sentence);
    }
  }
  for (int r = 0; r < 4; ++r) {
    RaterEntry rater;
    rater.id = "rater" + std::to_string(r);
    rater.state = RaterState::kActive;
    rater.languages = {Lang(r % 2 == 0 ? "hin" : "tam")};
    rater.region = "region" + std::to_string(r);
    m.raters.push_back(rater);
  }
  return m;
}

// `systems` systems sys0..; each speaks every language with one voice per
// gender. `raters` active raters r0.. take languages round-robin.
inline BenchmarkManifest WideManifest(int languages, int systems,
                                      int sentences_per_language, int raters,
                                      int quota) {
  static const char* kCodes[] = {"ben", "guj", "hin", "kan", "mal",
                                 "mar", "ori", "tam", "tel", "urd"};
  BenchmarkManifest m;
  for (int l = 0; l < languages; ++l) m.languages.push_back(Lang(kCodes[l]));
  m.domains = {"news"};
  m.subsets = {Subset::kNormalized, Subset::kSymbolic, Subset::kCodemixed};
  for (int s = 0; s < systems; ++s) {
    SystemEntry system;
    system.id = "sys" + std::to_string(s);
    system.supported_languages.insert(m.languages.begin(), m.languages.end());
    for (Gender gender : {Gender::kMale, Gender::kFemale}) {
      VoiceEntry voice;
      voice.id = system.id + (gender == Gender::kMale ? "_m" : "_f");
      voice.system_id = system.id;
      voice.gender = gender;
      system.voices.push_back(voice);
    }
    m.systems.push_back(system);
  }
  for (const LanguageCode& language : m.languages) {
    for (int i = 0; i < sentences_per_language; ++i) {
      SentenceEntry sentence;
      sentence.id = language.code() + "_" + std::to_string(i);
      sentence.language = language;
      sentence.domain = "news";
      sentence.subset = kAllSubsets[i % 3];
      sentence.text = "text";
      m.sentences.push_back(sentence);
    }
  }
  for (int r = 0; r < raters; ++r) {
    RaterEntry rater;
    rater.id = "r" + std::to_string(r);
    rater.state = RaterState::kActive;
    rater.languages = {m.languages[r % languages]};
    rater.quota_total = quota;
    m.raters.push_back(rater);
  }
  return m;
}

inline Registry SmallRegistry() { return *Registry::Build(SmallManifest()); }

inline std::map<AxisId, Choice> AllAxes(Choice choice) {
  std::map<AxisId, Choice> axes;
  for (AxisId axis : kAllAxes) axes[axis] = choice;
  return axes;
}

// A well-formed record between `a` and `b` on hin_s0 by rater0.
inline ComparisonRecord MakeRecord(const std::string& id, const std::string& a,
                                   const std::string& b, Choice overall,
                                   const std::string& sentence = "hin_s0") {
  ComparisonRecord record;
  record.id = id;
  record.sentence_id = sentence;
  record.language = Lang(sentence.substr(0, 3));
  const int index = sentence.back() - '0';
  record.domain = index % 2 == 0 ? "news" : "finance";
  record.subset = kAllSubsets[index / 2];
  record.system_a = a;
  record.system_b = b;
  record.voice_a = a + "_f";
  record.voice_b = b + "_f";
  record.rater_id = "rater0";
  record.overall = overall;
  record.axes = AllAxes(overall);
  record.t_phase1 = absl::FromUnixMillis(1767225600000);
  record.t_phase2 = absl::FromUnixMillis(1767225612345);
  return record;
}

// A manually advanced clock.
struct FakeClock {
  absl::Time now = absl::FromUnixMillis(1767225600000);
  std::function<absl::Time()> AsClock() {
    return [this] { return now; };
  }
};

}  // namespace prefeval::testing

#endif  // PREFEVAL_TESTS_UNIT_FIXTURES_H_
