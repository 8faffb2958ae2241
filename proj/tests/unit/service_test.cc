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

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "prefeval/bt/leaderboard.h"
#include "prefeval/core/errors.h"
#include "prefeval/service/service.h"
#include "prefeval/sim/simulator.h"
#include "tests/unit/fixtures.h"

namespace prefeval::service {
namespace {

using Json = nlohmann::ordered_json;
using ::prefeval::testing::FakeClock;

Service::TokenSource CountingTokens() {
  auto counter = std::make_shared<int>(0);
  return [counter] { return "tok" + std::to_string((*counter)++); };
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override { Make(testing::SmallManifest(), {}); }

  void Make(BenchmarkManifest manifest, storage::PreferenceLog log,
            ServiceConfig config = {}) {
    config.replicates = 50;
    service_ = std::make_unique<Service>(*Registry::Build(std::move(manifest)),
                                         std::move(log), config, clock_.AsClock(),
                                         std::nullopt, CountingTokens());
  }

  HttpResponse Call(const std::string& method, const std::string& path,
                    const std::string& body = "", const std::string& token = "",
                    std::map<std::string, std::string> query = {}) {
    HttpRequest request;
    request.method = method;
    request.path = path;
    request.body = body;
    request.query = std::move(query);
    if (!token.empty()) request.headers["authorization"] = "Bearer " + token;
    return service_->Handle(request);
  }

  static Json Body(const HttpResponse& response) {
    return Json::parse(response.body);
  }

  std::string Login(const std::string& rater) {
    HttpResponse response =
        Call("POST", "/sessions", Json{{"rater_id", rater}}.dump());
    EXPECT_EQ(response.status, 201) << response.body;
    return Body(response)["token"];
  }

  // Runs one task to completion and returns its id.
  std::string Complete(const std::string& token) {
    Json next = Body(Call("GET", "/tasks/next", "", token));
    const std::string id = next["task"]["task_id"];
    EXPECT_EQ(Call("POST", "/tasks/" + id + "/overall",
                   R"({"choice":"A","listened":["A","B"]})", token)
                  .status,
              200);
    Json axes;
    for (AxisId axis : kAllAxes) axes["axes"][std::string(ToString(axis))] = "B";
    EXPECT_EQ(Call("POST", "/tasks/" + id + "/axes", axes.dump(), token).status,
              200);
    return id;
  }

  FakeClock clock_;
  std::unique_ptr<Service> service_;
};

TEST(StatusMapTest, ErrorCodesMapToHttp) {
  EXPECT_EQ(HttpStatusFor(errc::kInvalidArgument), 400);
  EXPECT_EQ(HttpStatusFor(errc::kParseError), 400);
  EXPECT_EQ(HttpStatusFor(errc::kUnauthenticated), 401);
  EXPECT_EQ(HttpStatusFor(errc::kUnknownTask), 404);
  EXPECT_EQ(HttpStatusFor(errc::kAlreadyLocked), 409);
  EXPECT_EQ(HttpStatusFor(errc::kTaskExpired), 409);
  EXPECT_EQ(HttpStatusFor(errc::kGenderMismatch), 422);
  EXPECT_EQ(HttpStatusFor(errc::kNonIdentifiable), 422);
  EXPECT_EQ(HttpStatusFor("something_else"), 500);
}

TEST_F(ServiceTest, Health) {
  HttpResponse response = Call("GET", "/healthz");
  EXPECT_EQ(response.status, 200);
  EXPECT_EQ(Body(response)["status"], "ok");
  EXPECT_EQ(Body(response)["systems"], 3);
}

TEST_F(ServiceTest, RoutingErrors) {
  HttpResponse missing = Call("GET", "/nowhere");
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(Body(missing)["code"], "not_found");
  EXPECT_TRUE(Body(missing).contains("details"));
  EXPECT_EQ(Call("GET", "/sessions").status, 405);
  EXPECT_EQ(Call("GET", "/leaderboard", "", "", {{"colour", "red"}}).status, 400);
}

TEST_F(ServiceTest, Sessions) {
  EXPECT_EQ(Call("POST", "/sessions", R"({"rater_id":"nobody"})").status, 404);
  EXPECT_EQ(Call("POST", "/sessions", R"({})").status, 400);
  HttpResponse bad_json = Call("POST", "/sessions", "{not json");
  EXPECT_EQ(bad_json.status, 400);
  EXPECT_EQ(Body(bad_json)["code"], "parse_error");
  HttpResponse ok = Call("POST", "/sessions", R"({"rater_id":"rater0"})");
  EXPECT_EQ(ok.status, 201);
  EXPECT_EQ(Body(ok)["rater_id"], "rater0");
  EXPECT_EQ(Body(ok)["expires_at"], "2026-01-01T12:00:00.000Z");
}

TEST_F(ServiceTest, BearerTokens) {
  EXPECT_EQ(Call("GET", "/tasks/next").status, 401);
  EXPECT_EQ(Call("GET", "/tasks/next", "", "forged").status, 401);
  const std::string token = Login("rater0");
  EXPECT_EQ(Call("GET", "/tasks/next", "", token).status, 200);
  clock_.now += absl::Hours(13);
  HttpResponse expired = Call("GET", "/tasks/next", "", token);
  EXPECT_EQ(expired.status, 401);
  EXPECT_EQ(Body(expired)["code"], "unauthenticated");
}

TEST_F(ServiceTest, OpenTaskIsBlinded) {
  const std::string token = Login("rater0");
  HttpResponse response = Call("GET", "/tasks/next", "", token);
  ASSERT_EQ(response.status, 200);
  Json body = Body(response);
  EXPECT_EQ(body["status"], "assigned");
  EXPECT_EQ(body["task"]["slots"].size(), 2u);
  EXPECT_EQ(body["task"]["state"], "assigned");
  for (const SystemEntry& system : service_->registry().manifest().systems) {
    EXPECT_EQ(response.body.find(system.id), std::string::npos) << system.id;
  }
  EXPECT_EQ(response.body.find("audio://"), std::string::npos);
  // The same open task comes back with the same opaque audio ids.
  EXPECT_EQ(Call("GET", "/tasks/next", "", token).body, response.body);
}

TEST_F(ServiceTest, TwoPhaseFlow) {
  const std::string token = Login("rater0");
  Json next = Body(Call("GET", "/tasks/next", "", token));
  const std::string id = next["task"]["task_id"];
  const std::string overall = "/tasks/" + id + "/overall";

  HttpResponse unheard = Call("POST", overall, R"({"choice":"A"})", token);
  EXPECT_EQ(unheard.status, 422);
  EXPECT_EQ(Body(unheard)["code"], "incomplete_listening");
  EXPECT_EQ(Call("POST", overall, R"({"choice":"Maybe","listened":["A","B"]})",
                 token)
                .status,
            400);

  HttpResponse first =
      Call("POST", overall, R"({"choice":"A","listened":["A","B"]})", token);
  EXPECT_EQ(first.status, 200);
  EXPECT_EQ(Body(first)["state"], "phase1_locked");
  HttpResponse second =
      Call("POST", overall, R"({"choice":"B","listened":["A","B"]})", token);
  EXPECT_EQ(second.status, 409);
  EXPECT_EQ(Body(second)["code"], "already_locked");

  Json axes;
  axes["axes"]["intelligibility"] = "A";
  HttpResponse partial = Call("POST", "/tasks/" + id + "/axes", axes.dump(), token);
  EXPECT_EQ(partial.status, 422);
  EXPECT_EQ(Body(partial)["code"], "incomplete_axes");
  for (AxisId axis : kAllAxes) axes["axes"][std::string(ToString(axis))] = "A";
  EXPECT_EQ(Call("POST", "/tasks/" + id + "/axes", axes.dump(), token).status, 200);
  EXPECT_EQ(service_->log_size(), 1u);
  EXPECT_EQ(Call("POST", "/tasks/" + id + "/axes", axes.dump(), token).status, 409);
}

TEST_F(ServiceTest, RetriesWithRequestIdAreIdempotent) {
  const std::string token = Login("rater0");
  Json next = Body(Call("GET", "/tasks/next", "", token));
  const std::string id = next["task"]["task_id"];
  const std::string body = R"({"choice":"B","listened":["A","B"],"request_id":"r1"})";
  HttpResponse first = Call("POST", "/tasks/" + id + "/overall", body, token);
  HttpResponse retry = Call("POST", "/tasks/" + id + "/overall", body, token);
  EXPECT_EQ(first.status, 200);
  EXPECT_EQ(retry.status, 200);
  EXPECT_EQ(first.body, retry.body);

  Json axes;
  axes["request_id"] = "r2";
  for (AxisId axis : kAllAxes) axes["axes"][std::string(ToString(axis))] = "BothGood";
  HttpResponse done = Call("POST", "/tasks/" + id + "/axes", axes.dump(), token);
  HttpResponse again = Call("POST", "/tasks/" + id + "/axes", axes.dump(), token);
  EXPECT_EQ(done.status, 200);
  EXPECT_EQ(done.body, again.body);
  EXPECT_EQ(service_->log_size(), 1u);
}

TEST_F(ServiceTest, TasksBelongToTheirRater) {
  const std::string owner = Login("rater0");
  const std::string other = Login("rater2");
  Json next = Body(Call("GET", "/tasks/next", "", owner));
  const std::string id = next["task"]["task_id"];
  HttpResponse response = Call("POST", "/tasks/" + id + "/overall",
                               R"({"choice":"A","listened":["A","B"]})", other);
  EXPECT_EQ(response.status, 404);
  EXPECT_EQ(Call("POST", "/tasks/task-99999999/overall",
                 R"({"choice":"A","listened":["A","B"]})", owner)
                .status,
            404);
  const std::string audio = next["task"]["slots"][0]["audio_url"];
  EXPECT_EQ(Call("GET", audio, "", other).status, 404);
}

TEST_F(ServiceTest, QuotaExhaustedIsNotAnError) {
  BenchmarkManifest manifest = testing::SmallManifest();
  manifest.raters[0].quota_total = 0;
  Make(manifest, {});
  const std::string token = Login("rater0");
  HttpResponse response = Call("GET", "/tasks/next", "", token);
  EXPECT_EQ(response.status, 200);
  EXPECT_EQ(Body(response)["status"], "quota_exhausted");
}

TEST_F(ServiceTest, AudioIsProxiedFromLocalFiles) {
  const std::string path = ::testing::TempDir() + "/clip.wav";
  {
    std::ofstream out(path, std::ios::binary);
    out << "RIFF-fake-bytes";
  }
  BenchmarkManifest manifest = testing::SmallManifest();
  manifest.audio_uri_template = "file://" + path;
  Make(manifest, {});
  const std::string token = Login("rater0");
  Json next = Body(Call("GET", "/tasks/next", "", token));
  HttpResponse audio =
      Call("GET", next["task"]["slots"][1]["audio_url"], "", token);
  EXPECT_EQ(audio.status, 200);
  EXPECT_EQ(audio.content_type, "audio/wav");
  EXPECT_EQ(audio.body, "RIFF-fake-bytes");
  std::remove(path.c_str());
}

TEST_F(ServiceTest, RemoteAudioIsNotFetched) {
  const std::string token = Login("rater0");
  Json next = Body(Call("GET", "/tasks/next", "", token));
  EXPECT_EQ(Call("GET", next["task"]["slots"][0]["audio_url"], "", token).status,
            404);
}

class AnalyticsTest : public ServiceTest {
 protected:
  void SetUp() override {
    sim::WorldSpec spec;
    spec.n_systems = 4;
    spec.true_ratings = sim::EvenlySpacedRatings(4, 80);
    spec.n_raters = 12;
    spec.quota_per_rater = 60;
    spec.n_sentences = 30;
    spec.languages = {testing::Lang("hin"), testing::Lang("tam")};
    spec.axis_weights = {0.4, 0.3, 0.1, 0.1, 0.05, 0.05};
    spec.seed = 5;
    world_ = *sim::RunSimulation(spec);
    ServiceConfig config;
    config.seed = 17;
    Make(world_.manifest, world_.log, config);
  }

  sim::SimulatedWorld world_;
};

TEST_F(AnalyticsTest, LeaderboardMatchesEngineAndRepeats) {
  HttpResponse first = Call("GET", "/leaderboard");
  HttpResponse second = Call("GET", "/leaderboard");
  ASSERT_EQ(first.status, 200) << first.body;
  EXPECT_EQ(first.body, second.body);

  bt::LeaderboardConfig config;
  config.bootstrap.seed = 17;
  config.bootstrap.replicates = 50;
  auto board = bt::BuildLeaderboard(world_.log, {}, config);
  ASSERT_TRUE(board.ok());
  const Registry registry = *Registry::Build(world_.manifest);
  EXPECT_EQ(first.body, bt::LeaderboardToJson(*board, &registry).dump());
  Json body = Body(first);
  EXPECT_EQ(body["seed"], 17);
  EXPECT_EQ(body["log_size"], world_.log.size());
}

TEST_F(AnalyticsTest, FiltersAndSeedOverride) {
  Json symbolic = Body(Call("GET", "/leaderboard", "", "", {{"subset", "symbolic"}}));
  EXPECT_EQ(symbolic["filter"], "subset=symbolic");
  Json seeded = Body(Call("GET", "/leaderboard", "", "", {{"seed", "3"}}));
  EXPECT_EQ(seeded["seed"], 3);
  EXPECT_EQ(Call("GET", "/leaderboard", "", "", {{"subset", "poetry"}}).status, 400);
  EXPECT_EQ(Call("GET", "/leaderboard", "", "", {{"seed", "x"}}).status, 400);
}

TEST_F(AnalyticsTest, NonIdentifiableSliceListsCounts) {
  // Keep only comparisons the weakest system lost, so it never wins.
  storage::PreferenceLog log;
  for (const ComparisonRecord& r : world_.log) {
    const bool has4 = r.system_a == "sys04" || r.system_b == "sys04";
    const bool sys4_won = (r.system_a == "sys04" && r.overall == Choice::kA) ||
                          (r.system_b == "sys04" && r.overall == Choice::kB);
    if (!has4 || (!sys4_won && r.overall != Choice::kBothGood &&
                  r.overall != Choice::kBothBad)) {
      log.push_back(r);
    }
  }
  Make(world_.manifest, log);
  HttpResponse response = Call("GET", "/leaderboard");
  EXPECT_EQ(response.status, 422);
  Json body = Body(response);
  EXPECT_EQ(body["code"], "non_identifiable");
  EXPECT_GT(body["details"]["comparisons"]["sys04"].get<int>(), 0);
  EXPECT_EQ(body["details"]["comparisons"].size(), 4u);
}

TEST_F(AnalyticsTest, CacheFollowsTheLog) {
  Json before = Body(Call("GET", "/winrates"));
  EXPECT_EQ(before["log_size"], world_.log.size());
  EXPECT_EQ(before["win_rates"].size(), 4u);
  // Quotas are spent in the simulated world; widen one to get a task.
  BenchmarkManifest manifest = world_.manifest;
  manifest.raters[0].quota_total = 1000;
  Make(manifest, world_.log);
  const std::string fresh = Login("rater0001");
  Complete(fresh);
  Json after = Body(Call("GET", "/winrates"));
  EXPECT_EQ(after["log_size"], world_.log.size() + 1);
}

TEST_F(AnalyticsTest, AxisWinRates) {
  Json body = Body(Call("GET", "/winrates", "", "", {{"axes", "1"}}));
  ASSERT_EQ(body["win_rates"].size(), 4u);
  EXPECT_TRUE(body["win_rates"][0].contains("hallucinations"));
}

TEST_F(AnalyticsTest, ReliabilityCurves) {
  HttpResponse response =
      Call("GET", "/reliability/curves", "", "",
           {{"mode", "raters"}, {"grid", "6,12"}, {"trials", "3"}, {"replicates", "10"}});
  ASSERT_EQ(response.status, 200) << response.body;
  Json body = Body(response);
  EXPECT_EQ(body["grid"].size(), 2u);
  EXPECT_EQ(body["seed"], 17);
  EXPECT_DOUBLE_EQ(body["grid"][1]["mean_rho"].get<double>(), 1.0);
  EXPECT_EQ(Call("GET", "/reliability/curves", "", "", {{"mode", "voices"}}).status,
            400);
}

TEST_F(AnalyticsTest, ShapleyReport) {
  HttpResponse response =
      Call("GET", "/reports/shapley", "", "", {{"train_languages", "hin"}});
  ASSERT_EQ(response.status, 200) << response.body;
  Json body = Body(response);
  EXPECT_EQ(body["shapley"]["axes"][0]["axis"], "intelligibility");
  EXPECT_EQ(body["shapley"]["axes"][1]["axis"], "expressiveness");
}

}  // namespace
}  // namespace prefeval::service
