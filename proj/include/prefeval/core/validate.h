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

#ifndef PREFEVAL_CORE_VALIDATE_H_
#define PREFEVAL_CORE_VALIDATE_H_

#include "absl/status/statusor.h"
#include "prefeval/core/registry.h"
#include "prefeval/core/types.h"

namespace prefeval {

// Returns `record` unchanged iff it satisfies every ComparisonRecord
// invariant against `registry`. Each violated invariant has its own error
// code: unknown_reference, self_comparison, gender_mismatch,
// unsupported_language, attribute_mismatch, incomplete_axes,
// timestamp_order. Rater ids are checked only when the registry carries a
// roster.
absl::StatusOr<ComparisonRecord> ValidateRecord(const ComparisonRecord& record,
                                                const Registry& registry);

}  // namespace prefeval

#endif  // PREFEVAL_CORE_VALIDATE_H_
