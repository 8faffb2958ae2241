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

#include "prefeval/storage/json_codec.h"

#include <algorithm>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/status_macros.h"

namespace prefeval::storage {
namespace {

absl::Status FieldError(absl::string_view field, absl::string_view message) {
  return InvalidError(errc::kParseError,
                      absl::StrCat("field '", field, "': ", message));
}

// Re-tags a token parse failure with the field it came from.
absl::Status AtField(absl::string_view field, const absl::Status& status) {
  return MakeError(status.code(), ErrorCodeOf(status),
                   absl::StrCat("field '", field, "': ", status.message()));
}

absl::Status CheckObject(const Json& json, absl::string_view what,
                         std::initializer_list<absl::string_view> allowed) {
  if (!json.is_object()) {
    return InvalidError(errc::kParseError,
                        absl::StrCat(what, " is not a JSON object"));
  }
  for (const auto& item : json.items()) {
    if (std::find(allowed.begin(), allowed.end(), absl::string_view(item.key())) == allowed.end()) {
      return FieldError(item.key(), absl::StrCat("unknown field in ", what));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> GetString(const Json& json, absl::string_view key) {
  auto it = json.find(std::string(key));
  if (it == json.end()) return FieldError(key, "missing");
  if (!it->is_string()) return FieldError(key, "expected a string");
  return it->get<std::string>();
}

absl::StatusOr<int> GetInt(const Json& json, absl::string_view key,
                           int default_value) {
  auto it = json.find(std::string(key));
  if (it == json.end()) return default_value;
  if (!it->is_number_integer()) return FieldError(key, "expected an integer");
  return it->get<int>();
}

// Parses a string field with one of the closed-vocabulary parsers.
template <typename Parser>
auto GetToken(const Json& json, absl::string_view key, Parser parser)
    -> decltype(parser(absl::string_view())) {
  PREFEVAL_ASSIGN_OR_RETURN(std::string token, GetString(json, key));
  auto parsed = parser(token);
  if (!parsed.ok()) return AtField(key, parsed.status());
  return parsed;
}

absl::StatusOr<LanguageCode> ParseLanguage(absl::string_view token) {
  return LanguageCode::Parse(token);
}

absl::StatusOr<std::set<LanguageCode>> GetLanguageSet(const Json& json,
                                                      absl::string_view key) {
  std::set<LanguageCode> languages;
  auto it = json.find(std::string(key));
  if (it == json.end()) return languages;
  if (!it->is_array()) return FieldError(key, "expected an array");
  for (const Json& element : *it) {
    if (!element.is_string()) return FieldError(key, "expected strings");
    auto language = LanguageCode::Parse(element.get<std::string>());
    if (!language.ok()) return AtField(key, language.status());
    languages.insert(*language);
  }
  return languages;
}

Json LanguagesToJson(const std::set<LanguageCode>& languages) {
  Json array = Json::array();
  for (const LanguageCode& language : languages) array.push_back(language.code());
  return array;
}

Json SentenceToJson(const SentenceEntry& sentence) {
  Json json;
  json["id"] = sentence.id;
  json["language"] = sentence.language.code();
  json["domain"] = sentence.domain;
  json["subset"] = std::string(ToString(sentence.subset));
  json["length_class"] = std::string(ToString(sentence.length_class));
  json["text"] = sentence.text;
  return json;
}

absl::StatusOr<SentenceEntry> SentenceFromJson(const Json& json) {
  PREFEVAL_RETURN_IF_ERROR(CheckObject(
      json, "sentence",
      {"id", "language", "domain", "subset", "length_class", "text"}));
  SentenceEntry sentence;
  PREFEVAL_ASSIGN_OR_RETURN(sentence.id, GetString(json, "id"));
  PREFEVAL_ASSIGN_OR_RETURN(sentence.language,
                            GetToken(json, "language", ParseLanguage));
  PREFEVAL_ASSIGN_OR_RETURN(sentence.domain, GetString(json, "domain"));
  PREFEVAL_ASSIGN_OR_RETURN(sentence.subset,
                            GetToken(json, "subset", ParseSubset));
  if (json.contains("length_class")) {
    PREFEVAL_ASSIGN_OR_RETURN(sentence.length_class,
                              GetToken(json, "length_class", ParseLengthClass));
  }
  PREFEVAL_ASSIGN_OR_RETURN(sentence.text, GetString(json, "text"));
  return sentence;
}

Json VoiceToJson(const VoiceEntry& voice) {
  Json json;
  json["id"] = voice.id;
  json["system_id"] = voice.system_id;
  json["gender"] = std::string(ToString(voice.gender));
  json["languages"] = LanguagesToJson(voice.languages);
  return json;
}

absl::StatusOr<VoiceEntry> VoiceFromJson(const Json& json,
                                         absl::string_view owner) {
  PREFEVAL_RETURN_IF_ERROR(
      CheckObject(json, "voice", {"id", "system_id", "gender", "languages"}));
  VoiceEntry voice;
  PREFEVAL_ASSIGN_OR_RETURN(voice.id, GetString(json, "id"));
  if (json.contains("system_id")) {
    PREFEVAL_ASSIGN_OR_RETURN(voice.system_id, GetString(json, "system_id"));
  } else {
    voice.system_id = std::string(owner);
  }
  PREFEVAL_ASSIGN_OR_RETURN(voice.gender, GetToken(json, "gender", ParseGender));
  PREFEVAL_ASSIGN_OR_RETURN(voice.languages, GetLanguageSet(json, "languages"));
  return voice;
}

Json SystemToJson(const SystemEntry& system) {
  Json json;
  json["id"] = system.id;
  json["display_name"] = system.display_name;
  json["supported_languages"] = LanguagesToJson(system.supported_languages);
  Json voices = Json::array();
  for (const VoiceEntry& voice : system.voices) voices.push_back(VoiceToJson(voice));
  json["voices"] = std::move(voices);
  return json;
}

absl::StatusOr<SystemEntry> SystemFromJson(const Json& json) {
  PREFEVAL_RETURN_IF_ERROR(CheckObject(
      json, "system", {"id", "display_name", "supported_languages", "voices"}));
  SystemEntry system;
  PREFEVAL_ASSIGN_OR_RETURN(system.id, GetString(json, "id"));
  if (json.contains("display_name")) {
    PREFEVAL_ASSIGN_OR_RETURN(system.display_name,
                              GetString(json, "display_name"));
  } else {
    system.display_name = system.id;
  }
  PREFEVAL_ASSIGN_OR_RETURN(system.supported_languages,
                            GetLanguageSet(json, "supported_languages"));
  auto voices = json.find("voices");
  if (voices != json.end()) {
    if (!voices->is_array()) return FieldError("voices", "expected an array");
    for (const Json& element : *voices) {
      PREFEVAL_ASSIGN_OR_RETURN(VoiceEntry voice,
                                VoiceFromJson(element, system.id));
      system.voices.push_back(std::move(voice));
    }
  }
  return system;
}

template <typename T, typename Decoder>
absl::StatusOr<std::vector<T>> GetArray(const Json& json, absl::string_view key,
                                        Decoder decoder) {
  std::vector<T> out;
  auto it = json.find(std::string(key));
  if (it == json.end()) return out;
  if (!it->is_array()) return FieldError(key, "expected an array");
  out.reserve(it->size());
  for (std::size_t i = 0; i < it->size(); ++i) {
    auto value = decoder((*it)[i]);
    if (!value.ok()) {
      return MakeError(value.status().code(), ErrorCodeOf(value.status()),
                       absl::StrCat(key, "[", i, "]: ", value.status().message()));
    }
    out.push_back(*std::move(value));
  }
  return out;
}

}  // namespace

Json RecordToJson(const ComparisonRecord& record) {
  Json json;
  json["id"] = record.id;
  json["sentence_id"] = record.sentence_id;
  json["language"] = record.language.code();
  json["domain"] = record.domain;
  json["subset"] = std::string(ToString(record.subset));
  json["system_a"] = record.system_a;
  json["system_b"] = record.system_b;
  json["voice_a"] = record.voice_a;
  json["voice_b"] = record.voice_b;
  json["rater_id"] = record.rater_id;
  json["overall"] = std::string(ToString(record.overall));
  Json axes = Json::object();
  for (const auto& [axis, choice] : record.axes) {
    axes[std::string(ToString(axis))] = std::string(ToString(choice));
  }
  json["axes"] = std::move(axes);
  json["t_phase1"] = FormatTimestamp(record.t_phase1);
  json["t_phase2"] = FormatTimestamp(record.t_phase2);
  return json;
}

absl::StatusOr<ComparisonRecord> RecordFromJson(const Json& json) {
  PREFEVAL_RETURN_IF_ERROR(CheckObject(
      json, "record",
      {"id", "sentence_id", "language", "domain", "subset", "system_a",
       "system_b", "voice_a", "voice_b", "rater_id", "overall", "axes",
       "t_phase1", "t_phase2"}));
  ComparisonRecord record;
  PREFEVAL_ASSIGN_OR_RETURN(record.id, GetString(json, "id"));
  PREFEVAL_ASSIGN_OR_RETURN(record.sentence_id, GetString(json, "sentence_id"));
  PREFEVAL_ASSIGN_OR_RETURN(record.language,
                            GetToken(json, "language", ParseLanguage));
  PREFEVAL_ASSIGN_OR_RETURN(record.domain, GetString(json, "domain"));
  PREFEVAL_ASSIGN_OR_RETURN(record.subset, GetToken(json, "subset", ParseSubset));
  PREFEVAL_ASSIGN_OR_RETURN(record.system_a, GetString(json, "system_a"));
  PREFEVAL_ASSIGN_OR_RETURN(record.system_b, GetString(json, "system_b"));
  PREFEVAL_ASSIGN_OR_RETURN(record.voice_a, GetString(json, "voice_a"));
  PREFEVAL_ASSIGN_OR_RETURN(record.voice_b, GetString(json, "voice_b"));
  PREFEVAL_ASSIGN_OR_RETURN(record.rater_id, GetString(json, "rater_id"));
  PREFEVAL_ASSIGN_OR_RETURN(record.overall,
                            GetToken(json, "overall", ParseChoice));
  auto axes = json.find("axes");
  if (axes == json.end()) return FieldError("axes", "missing");
  if (!axes->is_object()) return FieldError("axes", "expected an object");
  for (const auto& item : axes->items()) {
    auto axis = ParseAxisId(item.key());
    if (!axis.ok()) return AtField("axes", axis.status());
    if (!item.value().is_string()) {
      return FieldError(absl::StrCat("axes.", item.key()), "expected a string");
    }
    auto choice = ParseChoice(item.value().get<std::string>());
    if (!choice.ok()) {
      return AtField(absl::StrCat("axes.", item.key()), choice.status());
    }
    record.axes[*axis] = *choice;
  }
  PREFEVAL_ASSIGN_OR_RETURN(record.t_phase1,
                            GetToken(json, "t_phase1", ParseTimestamp));
  PREFEVAL_ASSIGN_OR_RETURN(record.t_phase2,
                            GetToken(json, "t_phase2", ParseTimestamp));
  return record;
}

std::string RecordToLine(const ComparisonRecord& record) {
  return RecordToJson(record).dump();
}

absl::StatusOr<ComparisonRecord> RecordFromLine(absl::string_view line) {
  PREFEVAL_ASSIGN_OR_RETURN(Json json, ParseJson(line));
  return RecordFromJson(json);
}

Json RaterToJson(const RaterEntry& rater) {
  Json json;
  json["id"] = rater.id;
  json["state"] = std::string(ToString(rater.state));
  json["gender"] = std::string(ToString(rater.gender));
  json["age_band"] = std::string(ToString(rater.age_band));
  json["region"] = rater.region;
  json["languages"] = LanguagesToJson(rater.languages);
  json["quota_total"] = rater.quota_total;
  json["quota_completed"] = rater.quota_completed;
  return json;
}

absl::StatusOr<RaterEntry> RaterFromJson(const Json& json) {
  PREFEVAL_RETURN_IF_ERROR(CheckObject(
      json, "rater",
      {"id", "state", "gender", "age_band", "region", "languages",
       "quota_total", "quota_completed"}));
  RaterEntry rater;
  PREFEVAL_ASSIGN_OR_RETURN(rater.id, GetString(json, "id"));
  PREFEVAL_ASSIGN_OR_RETURN(rater.state,
                            GetToken(json, "state", ParseRaterState));
  PREFEVAL_ASSIGN_OR_RETURN(rater.gender, GetToken(json, "gender", ParseGender));
  PREFEVAL_ASSIGN_OR_RETURN(rater.age_band,
                            GetToken(json, "age_band", ParseAgeBand));
  if (json.contains("region")) {
    PREFEVAL_ASSIGN_OR_RETURN(rater.region, GetString(json, "region"));
  }
  PREFEVAL_ASSIGN_OR_RETURN(rater.languages, GetLanguageSet(json, "languages"));
  PREFEVAL_ASSIGN_OR_RETURN(rater.quota_total,
                            GetInt(json, "quota_total", kDefaultRaterQuota));
  PREFEVAL_ASSIGN_OR_RETURN(rater.quota_completed,
                            GetInt(json, "quota_completed", 0));
  return rater;
}

Json ManifestToJson(const BenchmarkManifest& manifest) {
  Json json;
  Json languages = Json::array();
  for (const LanguageCode& language : manifest.languages) {
    languages.push_back(language.code());
  }
  json["languages"] = std::move(languages);
  json["domains"] = manifest.domains;
  Json subsets = Json::array();
  for (Subset subset : manifest.subsets) subsets.push_back(std::string(ToString(subset)));
  json["subsets"] = std::move(subsets);
  if (!manifest.audio_uri_template.empty()) {
    json["audio_uri_template"] = manifest.audio_uri_template;
  }
  Json systems = Json::array();
  for (const SystemEntry& system : manifest.systems) {
    systems.push_back(SystemToJson(system));
  }
  json["systems"] = std::move(systems);
  Json sentences = Json::array();
  for (const SentenceEntry& sentence : manifest.sentences) {
    sentences.push_back(SentenceToJson(sentence));
  }
  json["sentences"] = std::move(sentences);
  if (!manifest.raters.empty()) {
    Json raters = Json::array();
    for (const RaterEntry& rater : manifest.raters) {
      raters.push_back(RaterToJson(rater));
    }
    json["raters"] = std::move(raters);
  }
  return json;
}

absl::StatusOr<BenchmarkManifest> ManifestFromJson(const Json& json) {
  PREFEVAL_RETURN_IF_ERROR(CheckObject(
      json, "manifest",
      {"languages", "domains", "subsets", "audio_uri_template", "systems",
       "sentences", "raters"}));
  BenchmarkManifest manifest;
  auto languages = json.find("languages");
  if (languages == json.end() || !languages->is_array()) {
    return FieldError("languages", "expected an array");
  }
  for (const Json& element : *languages) {
    if (!element.is_string()) return FieldError("languages", "expected strings");
    auto language = LanguageCode::Parse(element.get<std::string>());
    if (!language.ok()) return AtField("languages", language.status());
    manifest.languages.push_back(*language);
  }
  auto domains = json.find("domains");
  if (domains == json.end() || !domains->is_array()) {
    return FieldError("domains", "expected an array");
  }
  for (const Json& element : *domains) {
    if (!element.is_string()) return FieldError("domains", "expected strings");
    manifest.domains.push_back(element.get<std::string>());
  }
  auto subsets = json.find("subsets");
  if (subsets == json.end()) {
    manifest.subsets.assign(kAllSubsets.begin(), kAllSubsets.end());
  } else {
    if (!subsets->is_array()) return FieldError("subsets", "expected an array");
    for (const Json& element : *subsets) {
      if (!element.is_string()) return FieldError("subsets", "expected strings");
      auto subset = ParseSubset(element.get<std::string>());
      if (!subset.ok()) return AtField("subsets", subset.status());
      manifest.subsets.push_back(*subset);
    }
  }
  if (json.contains("audio_uri_template")) {
    PREFEVAL_ASSIGN_OR_RETURN(manifest.audio_uri_template,
                              GetString(json, "audio_uri_template"));
  }
  PREFEVAL_ASSIGN_OR_RETURN(manifest.systems,
                            GetArray<SystemEntry>(json, "systems", SystemFromJson));
  PREFEVAL_ASSIGN_OR_RETURN(
      manifest.sentences,
      GetArray<SentenceEntry>(json, "sentences", SentenceFromJson));
  PREFEVAL_ASSIGN_OR_RETURN(manifest.raters,
                            GetArray<RaterEntry>(json, "raters", RaterFromJson));
  return manifest;
}

absl::StatusOr<Json> ParseJson(absl::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    return InvalidError(errc::kParseError,
                        absl::StrCat("malformed JSON: ", e.what()));
  }
}

}  // namespace prefeval::storage
