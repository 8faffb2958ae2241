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

#include "prefeval/core/errors.h"

#include <optional>
#include <string>

#include "absl/strings/cord.h"

namespace prefeval {
namespace {

constexpr char kErrorCodeUrl[] = "type.prefeval/error_code";

}  // namespace

absl::Status MakeError(absl::StatusCode code, absl::string_view error_code,
                       absl::string_view message) {
  absl::Status status(code, message);
  status.SetPayload(kErrorCodeUrl, absl::Cord(error_code));
  return status;
}

absl::Status InvalidError(absl::string_view error_code,
                          absl::string_view message) {
  return MakeError(absl::StatusCode::kInvalidArgument, error_code, message);
}

absl::Status PreconditionError(absl::string_view error_code,
                               absl::string_view message) {
  return MakeError(absl::StatusCode::kFailedPrecondition, error_code, message);
}

std::string ErrorCodeOf(const absl::Status& status) {
  if (status.ok()) return "";
  auto payload = status.GetPayload(kErrorCodeUrl);
  if (payload.has_value()) return std::string(*payload);
  switch (status.code()) {
    case absl::StatusCode::kNotFound:
      return std::string(errc::kNotFound);
    case absl::StatusCode::kUnauthenticated:
      return std::string(errc::kUnauthenticated);
    default:
      return std::string(errc::kInvalidArgument);
  }
}

}  // namespace prefeval
