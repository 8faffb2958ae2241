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

#ifndef PREFEVAL_SCHEDULER_QUALIFICATION_H_
#define PREFEVAL_SCHEDULER_QUALIFICATION_H_

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "prefeval/core/types.h"

namespace prefeval::scheduler {

enum class QualificationStage { kScreening, kJustification, kTraining };

absl::string_view ToString(QualificationStage stage);
absl::StatusOr<QualificationStage> ParseQualificationStage(
    absl::string_view token);

// registered -> screening_passed -> justification_passed -> trained -> active.
// Screening and justification each advance one step; training advances
// justification_passed to trained and trained to active. A failure rejects
// the rater. A stage that does not follow the current state is out_of_order.
absl::StatusOr<RaterEntry> AdvanceQualification(const RaterEntry& rater,
                                                QualificationStage stage,
                                                bool passed);

}  // namespace prefeval::scheduler

#endif  // PREFEVAL_SCHEDULER_QUALIFICATION_H_
