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

#include "prefeval/storage/manifest_io.h"

#include <fstream>
#include <sstream>
#include <string>

#include "absl/strings/str_cat.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/status_macros.h"
#include "prefeval/storage/json_codec.h"

namespace prefeval::storage {

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(absl::StatusCode::kNotFound, errc::kIoError,
                     absl::StrCat("cannot read ", path));
  }
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

absl::Status WriteFile(const std::string& path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(absl::StatusCode::kUnavailable, errc::kIoError,
                     absl::StrCat("cannot write ", path));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    return MakeError(absl::StatusCode::kUnavailable, errc::kIoError,
                     absl::StrCat("write failed: ", path));
  }
  return absl::OkStatus();
}

absl::StatusOr<Registry> LoadManifest(const std::string& path) {
  PREFEVAL_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  PREFEVAL_ASSIGN_OR_RETURN(Json json, ParseJson(text));
  PREFEVAL_ASSIGN_OR_RETURN(BenchmarkManifest manifest, ManifestFromJson(json));
  return Registry::Build(std::move(manifest));
}

absl::Status SaveManifest(const BenchmarkManifest& manifest,
                          const std::string& path) {
  return WriteFile(path, ManifestToJson(manifest).dump(2) + "\n");
}

}  // namespace prefeval::storage
