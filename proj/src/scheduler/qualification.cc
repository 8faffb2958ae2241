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

#include "prefeval/scheduler/qualification.h"

#include <array>
#include <optional>

#include "absl/strings/str_cat.h"
#include "prefeval/core/errors.h"

namespace prefeval::scheduler {
namespace {

constexpr std::array<absl::string_view, 3> kStageTokens = {
    "screening", "justification", "training"};

// Where a pass from `state` leads for each stage, or nullopt when the stage
// does not follow `state`. Training is taken twice: once to become trained
// and once more, as the trained rater's qualifying round, to become active.
std::optional<RaterState> OnPass(RaterState state, QualificationStage stage) {
  switch (stage) {
    case QualificationStage::kScreening:
      if (state == RaterState::kRegistered) return RaterState::kScreeningPassed;
      break;
    case QualificationStage::kJustification:
      if (state == RaterState::kScreeningPassed) {
        return RaterState::kJustificationPassed;
      }
      break;
    case QualificationStage::kTraining:
      if (state == RaterState::kJustificationPassed) return RaterState::kTrained;
      if (state == RaterState::kTrained) return RaterState::kActive;
      break;
  }
  return std::nullopt;
}

}  // namespace

absl::string_view ToString(QualificationStage stage) {
  return kStageTokens[static_cast<int>(stage)];
}

absl::StatusOr<QualificationStage> ParseQualificationStage(
    absl::string_view token) {
  for (int i = 0; i < 3; ++i) {
    if (kStageTokens[i] == token) return static_cast<QualificationStage>(i);
  }
  return InvalidError(errc::kInvalidToken,
                      absl::StrCat("invalid qualification stage '", token, "'"));
}

absl::StatusOr<RaterEntry> AdvanceQualification(const RaterEntry& rater,
                                                QualificationStage stage,
                                                bool passed) {
  const std::optional<RaterState> on_pass = OnPass(rater.state, stage);
  if (!on_pass.has_value()) {
    return PreconditionError(
        errc::kOutOfOrder,
        absl::StrCat("out of order: rater ", rater.id, " is ",
                     ToString(rater.state), ", cannot take ", ToString(stage)));
  }
  RaterEntry next = rater;
  next.state = passed ? *on_pass : RaterState::kRejected;
  return next;
}

}  // namespace prefeval::scheduler
