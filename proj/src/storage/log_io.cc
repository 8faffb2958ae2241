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

#include "prefeval/storage/log_io.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/status_macros.h"
#include "prefeval/core/validate.h"
#include "prefeval/storage/json_codec.h"

namespace prefeval::storage {
namespace {

absl::Status IoError(absl::string_view what, const std::string& path) {
  return MakeError(absl::StatusCode::kUnavailable, errc::kIoError,
                   absl::StrCat(what, " ", path, ": ", std::strerror(errno)));
}

absl::Status AtLine(int line, const absl::Status& status) {
  return MakeError(status.code(), ErrorCodeOf(status),
                   absl::StrCat("line ", line, ": ", status.message()));
}

}  // namespace

absl::StatusOr<LogWriter> LogWriter::Open(const std::string& path) {
  std::unordered_set<std::string> ids;
  {
    std::ifstream in(path);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      auto json = ParseJson(line);
      if (!json.ok()) return AtLine(line_number, json.status());
      auto id = json->find("id");
      if (id == json->end() || !id->is_string()) {
        return AtLine(line_number,
                      InvalidError(errc::kParseError, "field 'id': missing"));
      }
      ids.insert(id->get<std::string>());
    }
  }
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC,
                        0644);
  if (fd < 0) return IoError("cannot open", path);
  return LogWriter(fd, std::move(ids));
}

LogWriter::LogWriter(LogWriter&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), ids_(std::move(other.ids_)) {}

LogWriter& LogWriter::operator=(LogWriter&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    ids_ = std::move(other.ids_);
  }
  return *this;
}

LogWriter::~LogWriter() {
  if (fd_ >= 0) ::close(fd_);
}

absl::Status LogWriter::Append(const ComparisonRecord& record) {
  if (ids_.contains(record.id)) {
    return InvalidError(errc::kDuplicateId,
                        absl::StrCat("duplicate id ", record.id));
  }
  const std::string line = RecordToLine(record) + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      return MakeError(absl::StatusCode::kUnavailable, errc::kIoError,
                       absl::StrCat("write failed: ", std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
  ids_.insert(record.id);
  return absl::OkStatus();
}

absl::Status WriteLog(std::span<const ComparisonRecord> records,
                      const std::string& path) {
  PREFEVAL_ASSIGN_OR_RETURN(LogWriter writer, LogWriter::Open(path));
  for (const ComparisonRecord& record : records) {
    PREFEVAL_RETURN_IF_ERROR(writer.Append(record));
  }
  return absl::OkStatus();
}

absl::StatusOr<PreferenceLog> ReadLog(const std::string& path,
                                      const Registry& registry) {
  std::ifstream in(path);
  if (!in) return IoError("cannot read", path);
  PreferenceLog log;
  std::unordered_set<std::string> ids;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto record = RecordFromLine(line);
    if (!record.ok()) return AtLine(line_number, record.status());
    auto validated = ValidateRecord(*record, registry);
    if (!validated.ok()) return AtLine(line_number, validated.status());
    if (!ids.insert(validated->id).second) {
      return AtLine(line_number,
                    InvalidError(errc::kDuplicateId,
                                 absl::StrCat("duplicate id ", validated->id)));
    }
    log.push_back(*std::move(validated));
  }
  return log;
}

}  // namespace prefeval::storage
