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

#ifndef PREFEVAL_STORAGE_JSON_CODEC_H_
#define PREFEVAL_STORAGE_JSON_CODEC_H_

#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "json.hpp"
#include "prefeval/core/registry.h"
#include "prefeval/core/types.h"

namespace prefeval::storage {

using Json = nlohmann::ordered_json;

// Field order is fixed: the serialized form of a record is stable.
Json RecordToJson(const ComparisonRecord& record);
absl::StatusOr<ComparisonRecord> RecordFromJson(const Json& json);

// One JSON Lines line, without the trailing newline.
std::string RecordToLine(const ComparisonRecord& record);
absl::StatusOr<ComparisonRecord> RecordFromLine(absl::string_view line);

Json RaterToJson(const RaterEntry& rater);
absl::StatusOr<RaterEntry> RaterFromJson(const Json& json);

Json ManifestToJson(const BenchmarkManifest& manifest);
absl::StatusOr<BenchmarkManifest> ManifestFromJson(const Json& json);

// Parses text into a Json value, mapping exceptions to a parse_error status.
absl::StatusOr<Json> ParseJson(absl::string_view text);

}  // namespace prefeval::storage

#endif  // PREFEVAL_STORAGE_JSON_CODEC_H_
