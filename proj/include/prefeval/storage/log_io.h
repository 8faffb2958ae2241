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

#ifndef PREFEVAL_STORAGE_LOG_IO_H_
#define PREFEVAL_STORAGE_LOG_IO_H_

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "prefeval/core/registry.h"
#include "prefeval/core/types.h"

namespace prefeval::storage {

// Ordered, append-only sequence of validated comparisons.
using PreferenceLog = std::vector<ComparisonRecord>;

// Appends records to a JSON Lines file, one record per line. Each line is
// written with a single write(2) on an O_APPEND descriptor, so a crash never
// leaves a partial record in the middle of the file. Single writer.
class LogWriter {
 public:
  // Opens (creating if needed) `path` and indexes the ids already present.
  static absl::StatusOr<LogWriter> Open(const std::string& path);

  LogWriter(LogWriter&& other) noexcept;
  LogWriter& operator=(LogWriter&& other) noexcept;
  LogWriter(const LogWriter&) = delete;
  LogWriter& operator=(const LogWriter&) = delete;
  ~LogWriter();

  absl::Status Append(const ComparisonRecord& record);

  std::size_t size() const { return ids_.size(); }

 private:
  LogWriter(int fd, std::unordered_set<std::string> ids)
      : fd_(fd), ids_(std::move(ids)) {}

  int fd_ = -1;
  std::unordered_set<std::string> ids_;
};

// Appends `records` to `path`. Creates an empty file for an empty sequence.
// Fails with duplicate_id if any id is already present; records before the
// offending one stay written.
absl::Status WriteLog(std::span<const ComparisonRecord> records,
                      const std::string& path);

// Reads and validates every line. Errors name the 1-based line number.
absl::StatusOr<PreferenceLog> ReadLog(const std::string& path,
                                      const Registry& registry);

}  // namespace prefeval::storage

#endif  // PREFEVAL_STORAGE_LOG_IO_H_
