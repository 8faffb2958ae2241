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

#ifndef PREFEVAL_CORE_ERRORS_H_
#define PREFEVAL_CORE_ERRORS_H_

#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/status.h"

namespace prefeval {

// Machine-readable error codes. Every domain error carries one of these as a
// status payload so that the HTTP layer and the CLI can map errors without
// parsing messages.
namespace errc {
inline constexpr absl::string_view kInvalidArgument = "invalid_argument";
inline constexpr absl::string_view kParseError = "parse_error";
inline constexpr absl::string_view kInvalidToken = "invalid_token";
inline constexpr absl::string_view kIoError = "io_error";
inline constexpr absl::string_view kUnknownReference = "unknown_reference";
inline constexpr absl::string_view kSelfComparison = "self_comparison";
inline constexpr absl::string_view kGenderMismatch = "gender_mismatch";
inline constexpr absl::string_view kUnsupportedLanguage = "unsupported_language";
inline constexpr absl::string_view kIncompleteAxes = "incomplete_axes";
inline constexpr absl::string_view kTimestampOrder = "timestamp_order";
inline constexpr absl::string_view kAttributeMismatch = "attribute_mismatch";
inline constexpr absl::string_view kDuplicateId = "duplicate_id";
inline constexpr absl::string_view kSystemWithoutVoices = "system_without_voices";
inline constexpr absl::string_view kDanglingReference = "dangling_reference";
inline constexpr absl::string_view kEmptyLog = "empty_log";
inline constexpr absl::string_view kNonIdentifiable = "non_identifiable";
inline constexpr absl::string_view kNotConverged = "not_converged";
inline constexpr absl::string_view kDegenerateBootstrap = "degenerate_bootstrap";
inline constexpr absl::string_view kOutOfOrder = "out_of_order";
inline constexpr absl::string_view kRaterNotActive = "rater_not_active";
inline constexpr absl::string_view kNoAdmissiblePair = "no_admissible_pair";
inline constexpr absl::string_view kIncompleteListening = "incomplete_listening";
inline constexpr absl::string_view kAlreadyLocked = "already_locked";
inline constexpr absl::string_view kNotLocked = "not_locked";
inline constexpr absl::string_view kTaskExpired = "task_expired";
inline constexpr absl::string_view kTaskComplete = "task_complete";
inline constexpr absl::string_view kUnknownTask = "unknown_task";
inline constexpr absl::string_view kSingleClass = "single_class";
inline constexpr absl::string_view kLanguageLeakage = "language_leakage";
inline constexpr absl::string_view kEmptyHoldout = "empty_holdout";
inline constexpr absl::string_view kLengthMismatch = "length_mismatch";
inline constexpr absl::string_view kUndefinedCorrelation = "undefined_correlation";
inline constexpr absl::string_view kUnauthenticated = "unauthenticated";
inline constexpr absl::string_view kNotFound = "not_found";
}  // namespace errc

// Builds a status with `message` and attaches `error_code` as payload.
absl::Status MakeError(absl::StatusCode code, absl::string_view error_code,
                       absl::string_view message);

// Shorthands for the two codes used most.
absl::Status InvalidError(absl::string_view error_code, absl::string_view message);
absl::Status PreconditionError(absl::string_view error_code,
                               absl::string_view message);

// Returns the attached error code, or a code derived from the canonical
// status code when none was attached. Empty for OK.
std::string ErrorCodeOf(const absl::Status& status);

}  // namespace prefeval

#endif  // PREFEVAL_CORE_ERRORS_H_
