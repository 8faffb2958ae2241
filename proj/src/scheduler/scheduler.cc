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

#include "prefeval/scheduler/scheduler.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/validate.h"

namespace prefeval::scheduler {
namespace {

std::vector<const VoiceEntry*> VoicesFor(const SystemEntry& system,
                                         const LanguageCode& language,
                                         Gender gender) {
  std::vector<const VoiceEntry*> out;
  for (const VoiceEntry& voice : system.voices) {
    if (voice.gender != gender) continue;
    if (!voice.languages.empty() && !voice.languages.contains(language)) continue;
    out.push_back(&voice);
  }
  return out;
}

}  // namespace

absl::string_view ToString(TaskState state) {
  switch (state) {
    case TaskState::kAssigned:
      return "assigned";
    case TaskState::kPhase1Locked:
      return "phase1_locked";
    case TaskState::kComplete:
      return "complete";
    case TaskState::kExpired:
      return "expired";
  }
  return "";
}

absl::string_view ToString(NextTaskResult::Kind kind) {
  switch (kind) {
    case NextTaskResult::Kind::kAssigned:
      return "assigned";
    case NextTaskResult::Kind::kQuotaExhausted:
      return "quota_exhausted";
    case NextTaskResult::Kind::kPlanComplete:
      return "plan_complete";
  }
  return "";
}

Scheduler::Scheduler(const Registry& registry, PairPlan plan,
                     SchedulerOptions options, Clock clock, RecordSink sink)
    : registry_(registry),
      plan_(std::move(plan)),
      options_(std::move(options)),
      clock_(std::move(clock)),
      sink_(std::move(sink)),
      rng_(options_.seed) {
  for (const RaterEntry& rater : registry_.manifest().raters) {
    raters_.emplace(rater.id, rater);
  }
}

absl::StatusOr<RaterEntry> Scheduler::Rater(const std::string& rater_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = raters_.find(rater_id);
  if (it == raters_.end()) {
    return MakeError(absl::StatusCode::kNotFound, errc::kNotFound,
                     absl::StrCat("unknown rater ", rater_id));
  }
  return it->second;
}

absl::StatusOr<RaterEntry> Scheduler::AdvanceQualification(
    const std::string& rater_id, QualificationStage stage, bool passed) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = raters_.find(rater_id);
  if (it == raters_.end()) {
    return MakeError(absl::StatusCode::kNotFound, errc::kNotFound,
                     absl::StrCat("unknown rater ", rater_id));
  }
  auto next = scheduler::AdvanceQualification(it->second, stage, passed);
  if (next.ok()) it->second = *next;
  return next;
}

void Scheduler::ExpireLocked(absl::Time now) {
  for (auto& [id, entry] : tasks_) {
    Task& task = entry.task;
    if (task.state != TaskState::kAssigned &&
        task.state != TaskState::kPhase1Locked) {
      continue;
    }
    const absl::Time last =
        task.state == TaskState::kAssigned ? task.created_at : task.locked_at;
    if (now - last < options_.task_expiry) continue;
    task.state = TaskState::kExpired;
    plan_.Restore(entry.cell, task.rater_id);
    open_task_.erase(task.rater_id);
  }
}

void Scheduler::ExpireIdleTasks() {
  std::lock_guard<std::mutex> lock(mu_);
  ExpireLocked(clock_());
}

absl::StatusOr<NextTaskResult> Scheduler::NextTask(const std::string& rater_id) {
  std::lock_guard<std::mutex> lock(mu_);
  const absl::Time now = clock_();
  ExpireLocked(now);

  auto rater_it = raters_.find(rater_id);
  if (rater_it == raters_.end()) {
    return MakeError(absl::StatusCode::kNotFound, errc::kNotFound,
                     absl::StrCat("unknown rater ", rater_id));
  }
  const RaterEntry& rater = rater_it->second;
  if (rater.state != RaterState::kActive) {
    return PreconditionError(
        errc::kRaterNotActive,
        absl::StrCat("rater ", rater_id, " is ", ToString(rater.state)));
  }
  if (auto open = open_task_.find(rater_id); open != open_task_.end()) {
    return NextTaskResult{NextTaskResult::Kind::kAssigned,
                          tasks_.at(open->second).task};
  }
  if (rater.quota_completed >= rater.quota_total || plan_.quota(rater_id) <= 0) {
    return NextTaskResult{NextTaskResult::Kind::kQuotaExhausted, std::nullopt};
  }

  // Candidate cells in the rater's languages.
  std::vector<int> cells;
  bool any_language = false;
  for (const LanguageCode& language : rater.languages) {
    if (!registry_.HasLanguage(language)) continue;
    any_language = true;
    for (int cell : plan_.CellsFor(language)) cells.push_back(cell);
  }
  if (!any_language) {
    return PreconditionError(
        errc::kUnsupportedLanguage,
        absl::StrCat("rater ", rater_id, " speaks no benchmark language"));
  }
  if (cells.empty()) {
    return PreconditionError(
        errc::kNoAdmissiblePair,
        absl::StrCat("no admissible pair: fewer than two systems support the "
                     "languages of rater ",
                     rater_id));
  }

  // Largest remaining target first; a cell is admissible while the rater
  // still has an unseen sentence for it.
  auto unseen = [&](int cell) {
    std::vector<const SentenceEntry*> out;
    const auto& seen = issued_[{rater_id, cell}];
    for (int index : registry_.SentencesFor(plan_.cells()[cell].language)) {
      const SentenceEntry& sentence = registry_.manifest().sentences[index];
      if (!seen.contains(sentence.id)) out.push_back(&sentence);
    }
    return out;
  };
  int chosen = -1;
  std::vector<const SentenceEntry*> sentences;
  std::vector<int> pool = cells;
  while (!pool.empty()) {
    int best = 0;
    for (int cell : pool) best = std::max(best, plan_.target(cell));
    if (best <= 0) break;
    std::vector<int> top;
    for (int cell : pool) {
      if (plan_.target(cell) == best) top.push_back(cell);
    }
    const int cell = top[UniformIndex(rng_, top.size())];
    sentences = unseen(cell);
    if (!sentences.empty()) {
      chosen = cell;
      break;
    }
    pool.erase(std::find(pool.begin(), pool.end(), cell));
  }
  if (chosen < 0) {
    return NextTaskResult{NextTaskResult::Kind::kPlanComplete, std::nullopt};
  }
  const PlanCell& cell = plan_.cells()[chosen];
  const SentenceEntry& sentence = *sentences[UniformIndex(rng_, sentences.size())];

  const SystemEntry& system_a = *registry_.FindSystem(cell.system_a);
  const SystemEntry& system_b = *registry_.FindSystem(cell.system_b);
  std::vector<Gender> genders;
  for (Gender gender : {Gender::kMale, Gender::kFemale}) {
    if (!VoicesFor(system_a, cell.language, gender).empty() &&
        !VoicesFor(system_b, cell.language, gender).empty()) {
      genders.push_back(gender);
    }
  }
  if (genders.empty()) {
    return PreconditionError(
        errc::kNoAdmissiblePair,
        absl::StrCat("no admissible pair: ", cell.system_a, " and ",
                     cell.system_b, " share no voice gender in ",
                     cell.language.code()));
  }
  const Gender gender = genders[UniformIndex(rng_, genders.size())];
  const auto voices_a = VoicesFor(system_a, cell.language, gender);
  const auto voices_b = VoicesFor(system_b, cell.language, gender);
  const VoiceEntry& voice_a = *voices_a[UniformIndex(rng_, voices_a.size())];
  const VoiceEntry& voice_b = *voices_b[UniformIndex(rng_, voices_b.size())];

  Task task;
  task.id = absl::StrCat(options_.id_prefix, absl::StrFormat("%08d", next_id_++));
  task.rater_id = rater_id;
  task.sentence_id = sentence.id;
  task.language = cell.language;
  Slot first{system_a.id, voice_a.id,
             registry_.AudioUri(system_a.id, voice_a.id, sentence.id)};
  Slot second{system_b.id, voice_b.id,
              registry_.AudioUri(system_b.id, voice_b.id, sentence.id)};
  if (UniformUnit(rng_) < 0.5) std::swap(first, second);
  task.left = std::move(first);
  task.right = std::move(second);
  task.created_at = now;

  plan_.Take(chosen, rater_id);
  issued_[{rater_id, chosen}].insert(sentence.id);
  open_task_[rater_id] = task.id;
  TaskEntry entry;
  entry.task = task;
  entry.cell = chosen;
  tasks_.emplace(task.id, std::move(entry));
  return NextTaskResult{NextTaskResult::Kind::kAssigned, std::move(task)};
}

absl::StatusOr<Scheduler::TaskEntry*> Scheduler::FindLocked(
    const std::string& task_id) {
  auto it = tasks_.find(task_id);
  if (it == tasks_.end()) {
    return MakeError(absl::StatusCode::kNotFound, errc::kUnknownTask,
                     absl::StrCat("unknown task ", task_id));
  }
  return &it->second;
}

absl::StatusOr<Task> Scheduler::SubmitOverall(const std::string& task_id,
                                              Choice choice, bool playback_proof,
                                              const std::string& request_id) {
  std::lock_guard<std::mutex> lock(mu_);
  const absl::Time now = clock_();
  ExpireLocked(now);
  auto found = FindLocked(task_id);
  if (!found.ok()) return found.status();
  TaskEntry& entry = **found;
  Task& task = entry.task;

  if (task.state == TaskState::kExpired) {
    return PreconditionError(errc::kTaskExpired,
                             absl::StrCat("task expired: ", task_id));
  }
  if (task.state != TaskState::kAssigned) {
    if (!request_id.empty() && request_id == entry.overall_request_id &&
        task.overall == choice) {
      return task;
    }
    return MakeError(absl::StatusCode::kAlreadyExists, errc::kAlreadyLocked,
                     absl::StrCat("already locked: task ", task_id));
  }
  if (!playback_proof) {
    return PreconditionError(
        errc::kIncompleteListening,
        absl::StrCat("incomplete listening: both samples must be played "
                     "before task ",
                     task_id, " can be answered"));
  }
  task.state = TaskState::kPhase1Locked;
  task.overall = choice;
  task.locked_at = now;
  entry.overall_request_id = request_id;
  return task;
}

ComparisonRecord Scheduler::BuildRecord(const Task& task) const {
  const SentenceEntry& sentence = *registry_.FindSentence(task.sentence_id);
  const bool swapped = task.left.system_id > task.right.system_id;
  const Slot& a = swapped ? task.right : task.left;
  const Slot& b = swapped ? task.left : task.right;
  auto orient = [swapped](Choice c) { return swapped ? MirrorChoice(c) : c; };

  ComparisonRecord record;
  record.id = task.id;
  record.sentence_id = sentence.id;
  record.language = sentence.language;
  record.domain = sentence.domain;
  record.subset = sentence.subset;
  record.system_a = a.system_id;
  record.system_b = b.system_id;
  record.voice_a = a.voice_id;
  record.voice_b = b.voice_id;
  record.rater_id = task.rater_id;
  record.overall = orient(*task.overall);
  for (const auto& [axis, choice] : *task.axes) record.axes[axis] = orient(choice);
  record.t_phase1 = task.locked_at;
  record.t_phase2 = task.completed_at;
  return record;
}

absl::StatusOr<ComparisonRecord> Scheduler::SubmitAxes(
    const std::string& task_id, const std::map<AxisId, Choice>& axes,
    const std::string& request_id) {
  std::lock_guard<std::mutex> lock(mu_);
  const absl::Time now = clock_();
  ExpireLocked(now);
  auto found = FindLocked(task_id);
  if (!found.ok()) return found.status();
  TaskEntry& entry = **found;
  Task& task = entry.task;

  switch (task.state) {
    case TaskState::kAssigned:
      return PreconditionError(
          errc::kNotLocked,
          absl::StrCat("not locked: submit the overall choice of task ",
                       task_id, " first"));
    case TaskState::kExpired:
      return PreconditionError(errc::kTaskExpired,
                               absl::StrCat("task expired: ", task_id));
    case TaskState::kComplete:
      if (!request_id.empty() && request_id == entry.axes_request_id &&
          task.axes == axes) {
        return *entry.record;
      }
      return MakeError(absl::StatusCode::kAlreadyExists, errc::kTaskComplete,
                       absl::StrCat("task already complete: ", task_id));
    case TaskState::kPhase1Locked:
      break;
  }
  if (axes.size() != kAllAxes.size()) {
    return InvalidError(errc::kIncompleteAxes,
                        absl::StrCat("incomplete axes: got ", axes.size(),
                                     " of ", kAllAxes.size()));
  }

  Task completed = task;
  completed.axes = axes;
  completed.completed_at = now;
  completed.state = TaskState::kComplete;
  auto record = ValidateRecord(BuildRecord(completed), registry_);
  if (!record.ok()) return record.status();
  if (sink_) {
    if (auto status = sink_(*record); !status.ok()) return status;
  }
  task = std::move(completed);
  entry.record = *record;
  entry.axes_request_id = request_id;
  open_task_.erase(task.rater_id);
  ++raters_.at(task.rater_id).quota_completed;
  ++completed_;
  return *record;
}

absl::StatusOr<Task> Scheduler::GetTask(const std::string& task_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = tasks_.find(task_id);
  if (it == tasks_.end()) {
    return MakeError(absl::StatusCode::kNotFound, errc::kUnknownTask,
                     absl::StrCat("unknown task ", task_id));
  }
  return it->second.task;
}

int Scheduler::completed_records() const {
  std::lock_guard<std::mutex> lock(mu_);
  return completed_;
}

}  // namespace prefeval::scheduler
