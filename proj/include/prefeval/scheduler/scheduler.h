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

#ifndef PREFEVAL_SCHEDULER_SCHEDULER_H_
#define PREFEVAL_SCHEDULER_SCHEDULER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "prefeval/core/registry.h"
#include "prefeval/core/rng.h"
#include "prefeval/core/types.h"
#include "prefeval/scheduler/pair_plan.h"
#include "prefeval/scheduler/qualification.h"

namespace prefeval::scheduler {

enum class TaskState { kAssigned, kPhase1Locked, kComplete, kExpired };

absl::string_view ToString(TaskState state);

struct Slot {
  std::string system_id;
  std::string voice_id;
  std::string audio_uri;

  friend bool operator==(const Slot&, const Slot&) = default;
};

// Choices stored on a task are slot-relative: A is the left slot.
struct Task {
  std::string id;
  std::string rater_id;
  std::string sentence_id;
  LanguageCode language;
  Slot left;
  Slot right;
  TaskState state = TaskState::kAssigned;
  std::optional<Choice> overall;
  std::optional<std::map<AxisId, Choice>> axes;
  absl::Time created_at;
  absl::Time locked_at;
  absl::Time completed_at;

  friend bool operator==(const Task&, const Task&) = default;
};

struct NextTaskResult {
  enum class Kind { kAssigned, kQuotaExhausted, kPlanComplete };
  Kind kind = Kind::kAssigned;
  std::optional<Task> task;
};

absl::string_view ToString(NextTaskResult::Kind kind);

struct SchedulerOptions {
  std::uint64_t seed = 0;
  absl::Duration task_expiry = absl::Hours(24);
  // Prefix of task ids, which double as record ids.
  std::string id_prefix = "task-";
};

using Clock = std::function<absl::Time()>;
// Receives each completed record; a failure aborts the completion.
using RecordSink = std::function<absl::Status(const ComparisonRecord&)>;

// The two-phase annotation state machine. All public methods are
// linearizable: one mutex guards the whole state.
//
// Retries: a submit carrying the request id that already succeeded on the
// task returns the stored result again without side effects. Any other
// repeated submission fails (already_locked, task_complete).
class Scheduler {
 public:
  Scheduler(const Registry& registry, PairPlan plan, SchedulerOptions options,
            Clock clock, RecordSink sink);

  absl::StatusOr<RaterEntry> Rater(const std::string& rater_id) const;
  absl::StatusOr<RaterEntry> AdvanceQualification(const std::string& rater_id,
                                                  QualificationStage stage,
                                                  bool passed);

  // Returns the rater's open task if there is one, otherwise assigns a new
  // one: the admissible cell with the largest remaining target (ties broken
  // at random), a
  // sentence this rater has not seen with that pair, a same-gender voice
  // pair, and a random slot order.
  absl::StatusOr<NextTaskResult> NextTask(const std::string& rater_id);

  absl::StatusOr<Task> SubmitOverall(const std::string& task_id, Choice choice,
                                     bool playback_proof,
                                     const std::string& request_id = "");

  // Completes the task and emits its record in canonical system order
  // (system_a < system_b), with choices mirrored when the slots were swapped.
  absl::StatusOr<ComparisonRecord> SubmitAxes(
      const std::string& task_id, const std::map<AxisId, Choice>& axes,
      const std::string& request_id = "");

  absl::StatusOr<Task> GetTask(const std::string& task_id) const;

  // Expires idle tasks now instead of on the next call.
  void ExpireIdleTasks();

  const PairPlan& plan() const { return plan_; }
  int completed_records() const;

 private:
  struct TaskEntry {
    Task task;
    int cell = -1;
    std::string overall_request_id;
    std::string axes_request_id;
    std::optional<ComparisonRecord> record;
  };

  void ExpireLocked(absl::Time now);
  absl::StatusOr<TaskEntry*> FindLocked(const std::string& task_id);
  ComparisonRecord BuildRecord(const Task& task) const;

  const Registry& registry_;
  PairPlan plan_;
  SchedulerOptions options_;
  Clock clock_;
  RecordSink sink_;

  mutable std::mutex mu_;
  Rng rng_;
  std::uint64_t next_id_ = 1;
  int completed_ = 0;
  std::map<std::string, RaterEntry> raters_;
  std::map<std::string, TaskEntry> tasks_;
  std::map<std::string, std::string> open_task_;  // rater -> task id
  // (rater, cell) -> sentence ids already issued.
  std::map<std::pair<std::string, int>, std::set<std::string>> issued_;
};

}  // namespace prefeval::scheduler

#endif  // PREFEVAL_SCHEDULER_SCHEDULER_H_
