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

#ifndef PREFEVAL_STORAGE_MANIFEST_IO_H_
#define PREFEVAL_STORAGE_MANIFEST_IO_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "prefeval/core/registry.h"

namespace prefeval::storage {

// Parses manifest.json and resolves all cross references.
absl::StatusOr<Registry> LoadManifest(const std::string& path);

// Writes the manifest as pretty-printed JSON with stable key order.
absl::Status SaveManifest(const BenchmarkManifest& manifest,
                          const std::string& path);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, absl::string_view contents);

}  // namespace prefeval::storage

#endif  // PREFEVAL_STORAGE_MANIFEST_IO_H_
