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

#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "prefeval/core/errors.h"
#include "prefeval/scheduler/pair_plan.h"
#include "prefeval/scheduler/qualification.h"
#include "prefeval/scheduler/scheduler.h"
#include "tests/oracles/protocol_fuzz.h"
#include "tests/unit/fixtures.h"

namespace prefeval::scheduler {
namespace {

using ::prefeval::testing::AllAxes;
using ::prefeval::testing::FakeClock;
using ::prefeval::testing::SmallManifest;
using ::prefeval::testing::WideManifest;

using Kind = NextTaskResult::Kind;

RaterEntry InState(RaterState state) {
  RaterEntry rater;
  rater.id = "q";
  rater.state = state;
  return rater;
}

TEST(QualificationTest, ScreeningPassAdvances) {
  auto next = AdvanceQualification(InState(RaterState::kRegistered),
                                   QualificationStage::kScreening, true);
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(next->state, RaterState::kScreeningPassed);
}

TEST(QualificationTest, RepeatedScreeningIsOutOfOrder) {
  auto next = AdvanceQualification(InState(RaterState::kScreeningPassed),
                                   QualificationStage::kScreening, true);
  EXPECT_EQ(ErrorCodeOf(next.status()), errc::kOutOfOrder);
}

TEST(QualificationTest, FullPipelineEndsActive) {
  RaterEntry rater = InState(RaterState::kRegistered);
  for (QualificationStage stage :
       {QualificationStage::kScreening, QualificationStage::kJustification,
        QualificationStage::kTraining, QualificationStage::kTraining}) {
    auto next = AdvanceQualification(rater, stage, true);
    ASSERT_TRUE(next.ok()) << next.status();
    rater = *next;
  }
  EXPECT_EQ(rater.state, RaterState::kActive);
  auto trained = AdvanceQualification(InState(RaterState::kTrained),
                                      QualificationStage::kTraining, true);
  EXPECT_EQ(trained->state, RaterState::kActive);
}

TEST(QualificationTest, FailureRejectsFromAnyPreActiveState) {
  const std::vector<std::pair<RaterState, QualificationStage>> steps = {
      {RaterState::kRegistered, QualificationStage::kScreening},
      {RaterState::kScreeningPassed, QualificationStage::kJustification},
      {RaterState::kJustificationPassed, QualificationStage::kTraining},
      {RaterState::kTrained, QualificationStage::kTraining}};
  for (auto [state, stage] : steps) {
    auto next = AdvanceQualification(InState(state), stage, false);
    ASSERT_TRUE(next.ok());
    EXPECT_EQ(next->state, RaterState::kRejected);
  }
}

TEST(QualificationTest, TerminalStatesAcceptNoStage) {
  for (RaterState state : {RaterState::kActive, RaterState::kRejected}) {
    for (QualificationStage stage :
         {QualificationStage::kScreening, QualificationStage::kJustification,
          QualificationStage::kTraining}) {
      EXPECT_EQ(ErrorCodeOf(AdvanceQualification(InState(state), stage, true)
                                .status()),
                errc::kOutOfOrder);
    }
  }
}

TEST(PairPlanTest, CellsCoverSupportedPairs) {
  const Registry registry = *Registry::Build(SmallManifest());
  const PairPlan plan = PairPlan::Balanced(registry, 10);
  // hin: 3 systems -> 3 pairs; tam: sys_a and sys_b only.
  EXPECT_EQ(plan.cells().size(), 4u);
  EXPECT_EQ(plan.CellsFor(testing::Lang("tam")).size(), 1u);
  EXPECT_EQ(plan.quota("rater0"), kDefaultRaterQuota);
}

class SchedulerTest : public ::testing::Test {
 protected:
  explicit SchedulerTest(BenchmarkManifest manifest = SmallManifest())
      : registry_(*Registry::Build(std::move(manifest))) {}

  std::unique_ptr<Scheduler> Make(int target = 1000, std::uint64_t seed = 1) {
    SchedulerOptions options;
    options.seed = seed;
    return std::make_unique<Scheduler>(
        registry_, PairPlan::Balanced(registry_, target), options,
        clock_.AsClock(), [this](const ComparisonRecord& r) {
          log_.push_back(r);
          return absl::OkStatus();
        });
  }

  Task Next(Scheduler& s, const std::string& rater) {
    auto next = s.NextTask(rater);
    EXPECT_TRUE(next.ok()) << next.status();
    EXPECT_EQ(next->kind, Kind::kAssigned);
    return *next->task;
  }

  Registry registry_;
  FakeClock clock_;
  std::vector<ComparisonRecord> log_;
};

TEST_F(SchedulerTest, ExhaustedQuotaIsReported) {
  auto manifest = SmallManifest();
  manifest.raters[0].quota_completed = kDefaultRaterQuota;
  registry_ = *Registry::Build(manifest);
  auto s = Make();
  auto next = s->NextTask("rater0");
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(next->kind, Kind::kQuotaExhausted);
  EXPECT_FALSE(next->task.has_value());
}

TEST_F(SchedulerTest, InactiveOrUnknownRatersAreRefused) {
  auto manifest = SmallManifest();
  manifest.raters[0].state = RaterState::kTrained;
  registry_ = *Registry::Build(manifest);
  auto s = Make();
  EXPECT_EQ(ErrorCodeOf(s->NextTask("rater0").status()), errc::kRaterNotActive);
  EXPECT_EQ(ErrorCodeOf(s->NextTask("nobody").status()), errc::kNotFound);
  ASSERT_TRUE(s->AdvanceQualification("rater0", QualificationStage::kTraining,
                                      true)
                  .ok());
  EXPECT_TRUE(s->NextTask("rater0").ok());
}

TEST_F(SchedulerTest, ForcedPairWhenTwoSystemsSupportTheLanguage) {
  auto s = Make();
  for (int k = 0; k < 6; ++k) {
    const Task task = Next(*s, "rater1");  // tam
    std::set<std::string> systems = {task.left.system_id, task.right.system_id};
    EXPECT_EQ(systems, (std::set<std::string>{"sys_a", "sys_b"}));
    ASSERT_TRUE(s->SubmitOverall(task.id, Choice::kA, true).ok());
    ASSERT_TRUE(s->SubmitAxes(task.id, AllAxes(Choice::kA)).ok());
  }
  // All six tam sentences used with the only pair.
  auto next = s->NextTask("rater1");
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(next->kind, Kind::kPlanComplete);
}

TEST_F(SchedulerTest, SingleSystemLanguageHasNoAdmissiblePair) {
  auto manifest = SmallManifest();
  manifest.systems[1].supported_languages.erase(testing::Lang("tam"));
  for (auto& voice : manifest.systems[1].voices) voice.languages.erase(testing::Lang("tam"));
  registry_ = *Registry::Build(manifest);
  auto s = Make();
  EXPECT_EQ(ErrorCodeOf(s->NextTask("rater1").status()), errc::kNoAdmissiblePair);
}

TEST_F(SchedulerTest, TwoPhaseHappyPath) {
  auto s = Make();
  const Task task = Next(*s, "rater0");
  EXPECT_EQ(task.state, TaskState::kAssigned);
  EXPECT_NE(task.left.system_id, task.right.system_id);
  EXPECT_EQ(registry_.FindVoice(task.left.voice_id)->gender,
            registry_.FindVoice(task.right.voice_id)->gender);

  clock_.now += absl::Seconds(10);
  auto locked = s->SubmitOverall(task.id, Choice::kA, true);
  ASSERT_TRUE(locked.ok());
  EXPECT_EQ(locked->state, TaskState::kPhase1Locked);
  EXPECT_EQ(locked->overall, Choice::kA);

  clock_.now += absl::Seconds(20);
  auto record = s->SubmitAxes(task.id, AllAxes(Choice::kBothGood));
  ASSERT_TRUE(record.ok()) << record.status();
  ASSERT_EQ(log_.size(), 1u);
  EXPECT_EQ(log_[0], *record);
  EXPECT_EQ(record->t_phase2 - record->t_phase1, absl::Seconds(20));
  EXPECT_EQ(s->GetTask(task.id)->state, TaskState::kComplete);
  EXPECT_EQ(s->Rater("rater0")->quota_completed, 1);
}

TEST_F(SchedulerTest, SecondOverallIsAlreadyLocked) {
  auto s = Make();
  const Task task = Next(*s, "rater0");
  ASSERT_TRUE(s->SubmitOverall(task.id, Choice::kA, true).ok());
  auto again = s->SubmitOverall(task.id, Choice::kB, true);
  EXPECT_EQ(ErrorCodeOf(again.status()), errc::kAlreadyLocked);
  EXPECT_EQ(s->GetTask(task.id)->overall, Choice::kA);
}

TEST_F(SchedulerTest, MissingPlaybackProofLeavesTaskUntouched) {
  auto s = Make();
  const Task task = Next(*s, "rater0");
  auto result = s->SubmitOverall(task.id, Choice::kA, false);
  EXPECT_EQ(ErrorCodeOf(result.status()), errc::kIncompleteListening);
  EXPECT_EQ(*s->GetTask(task.id), task);
}

TEST_F(SchedulerTest, AxesNeedLockAndAllSixChoices) {
  auto s = Make();
  const Task task = Next(*s, "rater0");
  EXPECT_EQ(ErrorCodeOf(s->SubmitAxes(task.id, AllAxes(Choice::kA)).status()),
            errc::kNotLocked);
  ASSERT_TRUE(s->SubmitOverall(task.id, Choice::kB, true).ok());
  auto five = AllAxes(Choice::kA);
  five.erase(AxisId::kNoise);
  EXPECT_EQ(ErrorCodeOf(s->SubmitAxes(task.id, five).status()),
            errc::kIncompleteAxes);
  EXPECT_TRUE(log_.empty());
  EXPECT_TRUE(s->SubmitAxes(task.id, AllAxes(Choice::kA)).ok());
  EXPECT_EQ(ErrorCodeOf(s->SubmitAxes(task.id, AllAxes(Choice::kA)).status()),
            errc::kTaskComplete);
  EXPECT_EQ(ErrorCodeOf(s->SubmitAxes("task-x", AllAxes(Choice::kA)).status()),
            errc::kUnknownTask);
}

TEST_F(SchedulerTest, RetriesWithTheSameRequestIdReplay) {
  auto s = Make();
  const Task task = Next(*s, "rater0");
  auto first = s->SubmitOverall(task.id, Choice::kA, true, "req-1");
  auto retry = s->SubmitOverall(task.id, Choice::kA, true, "req-1");
  ASSERT_TRUE(retry.ok());
  EXPECT_EQ(*first, *retry);
  EXPECT_EQ(ErrorCodeOf(s->SubmitOverall(task.id, Choice::kB, true, "req-1")
                            .status()),
            errc::kAlreadyLocked);

  auto record = s->SubmitAxes(task.id, AllAxes(Choice::kA), "req-2");
  auto replay = s->SubmitAxes(task.id, AllAxes(Choice::kA), "req-2");
  ASSERT_TRUE(replay.ok());
  EXPECT_EQ(*record, *replay);
  EXPECT_EQ(log_.size(), 1u);
  EXPECT_EQ(s->Rater("rater0")->quota_completed, 1);
}

TEST_F(SchedulerTest, OpenTaskIsReturnedAgain) {
  auto s = Make();
  const Task first = Next(*s, "rater0");
  const Task again = Next(*s, "rater0");
  EXPECT_EQ(first, again);
}

TEST_F(SchedulerTest, RecordIsInCanonicalOrderWithMirroredChoices) {
  auto s = Make();
  int swapped = 0;
  for (int k = 0; k < 12; ++k) {
    const Task task = Next(*s, "rater0");
    ASSERT_TRUE(s->SubmitOverall(task.id, Choice::kA, true).ok());
    auto axes = AllAxes(Choice::kBothBad);
    axes[AxisId::kNoise] = Choice::kB;
    auto record = s->SubmitAxes(task.id, axes);
    ASSERT_TRUE(record.ok());
    EXPECT_LT(record->system_a, record->system_b);
    const bool was_swapped = task.left.system_id != record->system_a;
    swapped += was_swapped;
    // The left slot was preferred overall and lost on noise.
    EXPECT_EQ(record->overall, was_swapped ? Choice::kB : Choice::kA);
    EXPECT_EQ(record->axes.at(AxisId::kNoise),
              was_swapped ? Choice::kA : Choice::kB);
    EXPECT_EQ(record->axes.at(AxisId::kLiveliness), Choice::kBothBad);
    EXPECT_EQ(record->voice_a, was_swapped ? task.right.voice_id : task.left.voice_id);
  }
  EXPECT_GT(swapped, 0);
  EXPECT_LT(swapped, 12);
}

TEST_F(SchedulerTest, IdleTasksExpireAndReturnToThePlan) {
  auto s = Make(5);
  const Task task = Next(*s, "rater1");
  const int cell = s->plan().CellsFor(testing::Lang("tam"))[0];
  EXPECT_EQ(s->plan().target(cell), 4);
  EXPECT_EQ(s->plan().quota("rater1"), kDefaultRaterQuota - 1);
  clock_.now += absl::Hours(24);
  EXPECT_EQ(ErrorCodeOf(s->SubmitOverall(task.id, Choice::kA, true).status()),
            errc::kTaskExpired);
  EXPECT_EQ(s->GetTask(task.id)->state, TaskState::kExpired);
  EXPECT_EQ(s->plan().target(cell), 5);
  EXPECT_EQ(s->plan().quota("rater1"), kDefaultRaterQuota);
  const Task fresh = Next(*s, "rater1");
  EXPECT_NE(fresh.id, task.id);
  EXPECT_NE(fresh.sentence_id, task.sentence_id);
}

TEST_F(SchedulerTest, LockedTasksAlsoExpire) {
  auto s = Make();
  const Task task = Next(*s, "rater0");
  clock_.now += absl::Hours(20);
  ASSERT_TRUE(s->SubmitOverall(task.id, Choice::kA, true).ok());
  clock_.now += absl::Hours(20);
  EXPECT_TRUE(s->SubmitAxes(task.id, AllAxes(Choice::kA)).ok());
  const Task other = Next(*s, "rater0");
  ASSERT_TRUE(s->SubmitOverall(other.id, Choice::kA, true).ok());
  clock_.now += absl::Hours(24);
  EXPECT_EQ(ErrorCodeOf(s->SubmitAxes(other.id, AllAxes(Choice::kA)).status()),
            errc::kTaskExpired);
  EXPECT_EQ(log_.size(), 1u);
}

TEST_F(SchedulerTest, QuotaCapsCompletedRecords) {
  auto manifest = SmallManifest();
  manifest.raters[0].quota_total = 4;
  registry_ = *Registry::Build(manifest);
  auto s = Make();
  for (int k = 0; k < 4; ++k) {
    const Task task = Next(*s, "rater0");
    ASSERT_TRUE(s->SubmitOverall(task.id, Choice::kB, true).ok());
    ASSERT_TRUE(s->SubmitAxes(task.id, AllAxes(Choice::kB)).ok());
  }
  EXPECT_EQ(s->NextTask("rater0")->kind, Kind::kQuotaExhausted);
  EXPECT_EQ(s->Rater("rater0")->quota_completed, 4);
}

class BalanceTest : public SchedulerTest {
 protected:
  BalanceTest() : SchedulerTest(WideManifest(1, 3, 400, 30, 400)) {}
};

TEST_F(BalanceTest, PairCountsAndSlotsAreBalanced) {
  auto s = Make(1 << 20, 5);
  std::map<std::pair<std::string, std::string>, int> pairs;
  std::map<std::pair<std::string, std::string>, int> left_first;
  for (int k = 0; k < 10000; ++k) {
    const std::string rater = "r" + std::to_string(k % 30);
    const Task task = Next(*s, rater);
    auto key = std::minmax(task.left.system_id, task.right.system_id);
    ++pairs[{key.first, key.second}];
    left_first[{key.first, key.second}] += task.left.system_id == key.first;
    ASSERT_TRUE(s->SubmitOverall(task.id, Choice::kA, true).ok());
    ASSERT_TRUE(s->SubmitAxes(task.id, AllAxes(Choice::kA)).ok());
  }
  ASSERT_EQ(pairs.size(), 3u);
  for (const auto& [pair, count] : pairs) {
    EXPECT_NEAR(count, 10000.0 / 3, 0.05 * 10000.0 / 3);
    EXPECT_NEAR(static_cast<double>(left_first[pair]) / count, 0.5, 0.05);
  }
}

TEST_F(BalanceTest, ConcurrentRatersNeverRepeatATriple) {
  auto s = Make(1 << 20, 6);
  std::vector<std::thread> threads;
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&, t] {
      for (int k = 0; k < 150; ++k) {
        auto next = s->NextTask("r" + std::to_string(t));
        if (!next.ok() || !next->task) return;
        const std::string id = next->task->id;
        if (!s->SubmitOverall(id, Choice::kA, true).ok()) return;
        if (!s->SubmitAxes(id, AllAxes(Choice::kA)).ok()) return;
      }
    });
  }
  for (auto& thread : threads) thread.join();
  EXPECT_EQ(log_.size(), 900u);
  std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;
  for (const auto& r : log_) {
    EXPECT_TRUE(seen.insert({r.rater_id, r.sentence_id, r.system_a, r.system_b})
                    .second);
  }
}

TEST(ProtocolFuzzTest, RandomInterleavingsKeepTheProtocol) {
  const Registry registry = *Registry::Build(WideManifest(2, 3, 30, 6, 25));
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const oracle::FuzzReport report = oracle::RunProtocolFuzz(registry, seed, 2000);
    EXPECT_TRUE(report.violations.empty()) << report.violations.front();
    EXPECT_GT(report.records, 50);
    EXPECT_GT(report.rejected_calls, 0);
  }
}

}  // namespace
}  // namespace prefeval::scheduler
