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

#include "prefeval/service/service.h"

#include <climits>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "prefeval/bt/leaderboard.h"
#include "prefeval/bt/subgroup.h"
#include "prefeval/bt/win_rates.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/status_macros.h"
#include "prefeval/interpret/classifier.h"
#include "prefeval/interpret/features.h"
#include "prefeval/interpret/shapley.h"
#include "prefeval/reliability/curves.h"
#include "prefeval/storage/json_codec.h"

namespace prefeval::service {
namespace {

using Json = nlohmann::ordered_json;
using scheduler::NextTaskResult;
using scheduler::Task;

HttpResponse JsonResponse(int status, const Json& body) {
  HttpResponse response;
  response.status = status;
  response.body = body.dump();
  return response;
}

HttpResponse ErrorResponse(const absl::Status& status, Json details = Json::object()) {
  const std::string code = ErrorCodeOf(status);
  return JsonResponse(HttpStatusFor(code), Json{{"code", code},
                                                {"message", std::string(status.message())},
                                                {"details", std::move(details)}});
}

std::string RandomToken() {
  static thread_local std::random_device device;
  std::string token;
  for (int i = 0; i < 4; ++i) {
    absl::StrAppendFormat(&token, "%08x", static_cast<std::uint32_t>(device()));
  }
  return token;
}

absl::Status Unauthenticated(absl::string_view message) {
  return MakeError(absl::StatusCode::kUnauthenticated, errc::kUnauthenticated,
                   message);
}

absl::Status NotFound(absl::string_view message) {
  return MakeError(absl::StatusCode::kNotFound, errc::kNotFound, message);
}

// Rejects query parameters outside `allowed`.
absl::Status CheckQuery(const HttpRequest& request,
                        std::initializer_list<absl::string_view> allowed) {
  for (const auto& [key, value] : request.query) {
    bool known = false;
    for (absl::string_view name : allowed) known = known || name == key;
    if (!known) {
      return InvalidError(errc::kInvalidArgument,
                          absl::StrCat("unknown query parameter '", key, "'"));
    }
  }
  return absl::OkStatus();
}

std::string QueryValue(const HttpRequest& request, const std::string& key) {
  auto it = request.query.find(key);
  return it == request.query.end() ? "" : it->second;
}

template <typename T>
absl::StatusOr<T> QueryNumber(const HttpRequest& request, const std::string& key,
                              T fallback) {
  const std::string text = QueryValue(request, key);
  if (text.empty()) return fallback;
  T value;
  if (!absl::SimpleAtoi(text, &value)) {
    return InvalidError(errc::kInvalidArgument,
                        absl::StrCat("query parameter ", key, " must be an integer"));
  }
  return value;
}

absl::StatusOr<std::vector<int>> QueryIntList(const HttpRequest& request,
                                              const std::string& key) {
  std::vector<int> values;
  for (absl::string_view part :
       absl::StrSplit(QueryValue(request, key), ',', absl::SkipWhitespace())) {
    int value;
    if (!absl::SimpleAtoi(part, &value)) {
      return InvalidError(errc::kInvalidArgument,
                          absl::StrCat("query parameter ", key,
                                       " must be a comma-separated integer list"));
    }
    values.push_back(value);
  }
  return values;
}

absl::StatusOr<bt::SubgroupFilter> QueryFilter(const HttpRequest& request) {
  return bt::ParseFilter(QueryValue(request, "language"),
                         QueryValue(request, "domain"),
                         QueryValue(request, "subset"),
                         QueryValue(request, "systems"));
}

absl::StatusOr<std::set<LanguageCode>> QueryLanguages(const HttpRequest& request,
                                                      const std::string& key) {
  std::set<LanguageCode> languages;
  for (absl::string_view code :
       absl::StrSplit(QueryValue(request, key), ',', absl::SkipWhitespace())) {
    PREFEVAL_ASSIGN_OR_RETURN(LanguageCode language, LanguageCode::Parse(code));
    languages.insert(std::move(language));
  }
  return languages;
}

absl::StatusOr<Json> BodyJson(const HttpRequest& request) {
  PREFEVAL_ASSIGN_OR_RETURN(Json body, storage::ParseJson(request.body));
  if (!body.is_object()) {
    return InvalidError(errc::kInvalidArgument, "request body must be an object");
  }
  return body;
}

absl::StatusOr<std::string> BodyString(const Json& body, const std::string& key,
                                       bool required) {
  if (!body.contains(key)) {
    if (required) {
      return InvalidError(errc::kInvalidArgument,
                          absl::StrCat("missing field '", key, "'"));
    }
    return std::string();
  }
  if (!body.at(key).is_string()) {
    return InvalidError(errc::kInvalidArgument,
                        absl::StrCat("field '", key, "' must be a string"));
  }
  return body.at(key).get<std::string>();
}

std::string ContentTypeFor(absl::string_view path) {
  if (absl::EndsWith(path, ".wav")) return "audio/wav";
  if (absl::EndsWith(path, ".mp3")) return "audio/mpeg";
  if (absl::EndsWith(path, ".flac")) return "audio/flac";
  if (absl::EndsWith(path, ".ogg")) return "audio/ogg";
  return "application/octet-stream";
}

}  // namespace

int HttpStatusFor(absl::string_view code) {
  static const std::map<std::string, int, std::less<>> kStatus = {
      {"invalid_argument", 400},     {"parse_error", 400},
      {"invalid_token", 400},        {"unauthenticated", 401},
      {"not_found", 404},            {"unknown_task", 404},
      {"unknown_reference", 404},    {"already_locked", 409},
      {"not_locked", 409},           {"task_complete", 409},
      {"task_expired", 409},         {"out_of_order", 409},
      {"rater_not_active", 409},     {"duplicate_id", 409},
      {"method_not_allowed", 405},   {"gender_mismatch", 422},
      {"self_comparison", 422},      {"unsupported_language", 422},
      {"incomplete_axes", 422},      {"incomplete_listening", 422},
      {"timestamp_order", 422},      {"attribute_mismatch", 422},
      {"no_admissible_pair", 422},   {"non_identifiable", 422},
      {"not_converged", 422},        {"degenerate_bootstrap", 422},
      {"empty_log", 422},            {"single_class", 422},
      {"language_leakage", 422},     {"empty_holdout", 422},
      {"length_mismatch", 422},      {"undefined_correlation", 422}};
  auto it = kStatus.find(code);
  return it == kStatus.end() ? 500 : it->second;
}

Service::Service(Registry registry, storage::PreferenceLog existing,
                 ServiceConfig config, scheduler::Clock clock,
                 std::optional<storage::LogWriter> writer, TokenSource tokens)
    : registry_(std::move(registry)),
      config_(std::move(config)),
      clock_(std::move(clock)),
      tokens_(tokens ? std::move(tokens) : TokenSource(RandomToken)),
      writer_(std::move(writer)),
      log_(std::move(existing)) {
  const int target = config_.target_per_cell > 0 ? config_.target_per_cell : INT_MAX;
  scheduler_ = std::make_unique<scheduler::Scheduler>(
      registry_, scheduler::PairPlan::Balanced(registry_, target),
      config_.scheduler, clock_,
      [this](const ComparisonRecord& record) { return Append(record); });
}

std::size_t Service::log_size() const {
  std::lock_guard<std::mutex> lock(log_mu_);
  return log_.size();
}

std::shared_ptr<const storage::PreferenceLog> Service::Snapshot() const {
  std::lock_guard<std::mutex> lock(log_mu_);
  if (snapshot_ == nullptr || snapshot_->size() != log_.size()) {
    snapshot_ = std::make_shared<const storage::PreferenceLog>(log_);
  }
  return snapshot_;
}

absl::Status Service::Append(const ComparisonRecord& record) {
  std::lock_guard<std::mutex> lock(log_mu_);
  if (writer_.has_value()) PREFEVAL_RETURN_IF_ERROR(writer_->Append(record));
  log_.push_back(record);
  return absl::OkStatus();
}

HttpResponse Service::Handle(const HttpRequest& request) {
  const std::vector<std::string> parts =
      absl::StrSplit(absl::StripPrefix(request.path, "/"), '/');
  const std::string& method = request.method;
  auto route = [&]() -> absl::StatusOr<HttpResponse> {
    auto allow = [&](absl::string_view expected) -> absl::Status {
      if (method == expected) return absl::OkStatus();
      return MakeError(absl::StatusCode::kUnimplemented, "method_not_allowed",
                       absl::StrCat(method, " not allowed on ", request.path));
    };
    if (parts.size() == 1) {
      const std::string& head = parts[0];
      if (head == "sessions") {
        PREFEVAL_RETURN_IF_ERROR(allow("POST"));
        return CreateSession(request);
      }
      if (head == "leaderboard") {
        PREFEVAL_RETURN_IF_ERROR(allow("GET"));
        return Leaderboard(request);
      }
      if (head == "winrates") {
        PREFEVAL_RETURN_IF_ERROR(allow("GET"));
        return WinRates(request);
      }
      if (head == "healthz") {
        PREFEVAL_RETURN_IF_ERROR(allow("GET"));
        return Health();
      }
    } else if (parts.size() == 2) {
      if (parts[0] == "tasks" && parts[1] == "next") {
        PREFEVAL_RETURN_IF_ERROR(allow("GET"));
        return NextTask(request);
      }
      if (parts[0] == "reliability" && parts[1] == "curves") {
        PREFEVAL_RETURN_IF_ERROR(allow("GET"));
        return ReliabilityCurves(request);
      }
      if (parts[0] == "reports" && parts[1] == "shapley") {
        PREFEVAL_RETURN_IF_ERROR(allow("GET"));
        return ShapleyReport(request);
      }
      if (parts[0] == "audio") {
        PREFEVAL_RETURN_IF_ERROR(allow("GET"));
        return Audio(request, parts[1]);
      }
    } else if (parts.size() == 3 && parts[0] == "tasks") {
      if (parts[2] == "overall") {
        PREFEVAL_RETURN_IF_ERROR(allow("POST"));
        return SubmitOverall(request, parts[1]);
      }
      if (parts[2] == "axes") {
        PREFEVAL_RETURN_IF_ERROR(allow("POST"));
        return SubmitAxes(request, parts[1]);
      }
    }
    return NotFound(absl::StrCat("no route for ", request.path));
  };
  absl::StatusOr<HttpResponse> response = route();
  if (response.ok()) return *std::move(response);
  return ErrorResponse(response.status());
}

absl::StatusOr<std::string> Service::Authenticate(
    const HttpRequest& request) const {
  auto it = request.headers.find("authorization");
  if (it == request.headers.end()) {
    return Unauthenticated("missing bearer token");
  }
  absl::string_view value = it->second;
  if (!absl::ConsumePrefix(&value, "Bearer ")) {
    return Unauthenticated("authorization must be a bearer token");
  }
  std::lock_guard<std::mutex> lock(session_mu_);
  auto session = sessions_.find(std::string(value));
  if (session == sessions_.end() || clock_() >= session->second.expiry) {
    return Unauthenticated("unknown or expired session");
  }
  return session->second.rater_id;
}

absl::StatusOr<HttpResponse> Service::CreateSession(const HttpRequest& request) {
  PREFEVAL_ASSIGN_OR_RETURN(Json body, BodyJson(request));
  PREFEVAL_ASSIGN_OR_RETURN(std::string rater_id,
                            BodyString(body, "rater_id", true));
  if (registry_.FindRater(rater_id) == nullptr) {
    return NotFound(absl::StrCat("unknown rater ", rater_id));
  }
  const std::string token = tokens_();
  const absl::Time expiry = clock_() + config_.session_ttl;
  {
    std::lock_guard<std::mutex> lock(session_mu_);
    sessions_[token] = Session{rater_id, expiry};
  }
  return JsonResponse(201, Json{{"token", token},
                                {"rater_id", rater_id},
                                {"expires_at", FormatTimestamp(expiry)}});
}

Json Service::TaskView(const Task& task) {
  std::pair<std::string, std::string> ids;
  {
    std::lock_guard<std::mutex> lock(session_mu_);
    auto it = task_audio_.find(task.id);
    if (it == task_audio_.end()) {
      ids = {tokens_(), tokens_()};
      audio_[ids.first] = AudioHandle{task.rater_id, task.left.audio_uri};
      audio_[ids.second] = AudioHandle{task.rater_id, task.right.audio_uri};
      task_audio_[task.id] = ids;
    } else {
      ids = it->second;
    }
  }
  const SentenceEntry* sentence = registry_.FindSentence(task.sentence_id);
  Json view;
  view["task_id"] = task.id;
  view["state"] = std::string(ToString(task.state));
  view["sentence"] = {{"id", task.sentence_id},
                      {"language", task.language.code()},
                      {"text", sentence != nullptr ? sentence->text : ""}};
  view["slots"] = Json::array({{{"slot", "A"}, {"audio_url", "/audio/" + ids.first}},
                               {{"slot", "B"}, {"audio_url", "/audio/" + ids.second}}});
  if (task.overall.has_value()) {
    view["overall"] = std::string(ToString(*task.overall));
  }
  view["expires_at"] =
      FormatTimestamp(task.created_at + config_.scheduler.task_expiry);
  return view;
}

absl::StatusOr<HttpResponse> Service::NextTask(const HttpRequest& request) {
  PREFEVAL_RETURN_IF_ERROR(CheckQuery(request, {}));
  PREFEVAL_ASSIGN_OR_RETURN(std::string rater_id, Authenticate(request));
  PREFEVAL_ASSIGN_OR_RETURN(NextTaskResult result, scheduler_->NextTask(rater_id));
  Json body;
  body["status"] = std::string(ToString(result.kind));
  if (result.task.has_value()) body["task"] = TaskView(*result.task);
  return JsonResponse(200, body);
}

absl::StatusOr<HttpResponse> Service::SubmitOverall(const HttpRequest& request,
                                                    const std::string& task_id) {
  PREFEVAL_ASSIGN_OR_RETURN(std::string rater_id, Authenticate(request));
  PREFEVAL_ASSIGN_OR_RETURN(Task existing, scheduler_->GetTask(task_id));
  // Another rater's task is indistinguishable from a missing one.
  if (existing.rater_id != rater_id) {
    return MakeError(absl::StatusCode::kNotFound, errc::kUnknownTask,
                     absl::StrCat("unknown task ", task_id));
  }
  PREFEVAL_ASSIGN_OR_RETURN(Json body, BodyJson(request));
  PREFEVAL_ASSIGN_OR_RETURN(std::string choice_token,
                            BodyString(body, "choice", true));
  PREFEVAL_ASSIGN_OR_RETURN(Choice choice, ParseChoice(choice_token));
  PREFEVAL_ASSIGN_OR_RETURN(std::string request_id,
                            BodyString(body, "request_id", false));
  bool heard_a = false, heard_b = false;
  if (body.contains("listened")) {
    if (!body.at("listened").is_array()) {
      return InvalidError(errc::kInvalidArgument,
                          "field 'listened' must be an array of slots");
    }
    for (const Json& slot : body.at("listened")) {
      heard_a = heard_a || slot == "A";
      heard_b = heard_b || slot == "B";
    }
  }
  PREFEVAL_ASSIGN_OR_RETURN(
      Task task,
      scheduler_->SubmitOverall(task_id, choice, heard_a && heard_b, request_id));
  return JsonResponse(200, Json{{"task_id", task.id},
                                {"state", std::string(ToString(task.state))},
                                {"overall", std::string(ToString(*task.overall))}});
}

absl::StatusOr<HttpResponse> Service::SubmitAxes(const HttpRequest& request,
                                                 const std::string& task_id) {
  PREFEVAL_ASSIGN_OR_RETURN(std::string rater_id, Authenticate(request));
  PREFEVAL_ASSIGN_OR_RETURN(Task existing, scheduler_->GetTask(task_id));
  if (existing.rater_id != rater_id) {
    return MakeError(absl::StatusCode::kNotFound, errc::kUnknownTask,
                     absl::StrCat("unknown task ", task_id));
  }
  PREFEVAL_ASSIGN_OR_RETURN(Json body, BodyJson(request));
  PREFEVAL_ASSIGN_OR_RETURN(std::string request_id,
                            BodyString(body, "request_id", false));
  if (!body.contains("axes") || !body.at("axes").is_object()) {
    return InvalidError(errc::kInvalidArgument, "field 'axes' must be an object");
  }
  std::map<AxisId, Choice> axes;
  for (const auto& [name, value] : body.at("axes").items()) {
    PREFEVAL_ASSIGN_OR_RETURN(AxisId axis, ParseAxisId(name));
    if (!value.is_string()) {
      return InvalidError(errc::kInvalidToken,
                          absl::StrCat("axis ", name, " needs a choice token"));
    }
    PREFEVAL_ASSIGN_OR_RETURN(Choice choice, ParseChoice(value.get<std::string>()));
    axes[axis] = choice;
  }
  PREFEVAL_RETURN_IF_ERROR(
      scheduler_->SubmitAxes(task_id, axes, request_id).status());
  return JsonResponse(200, Json{{"task_id", task_id}, {"state", "complete"}});
}

absl::StatusOr<HttpResponse> Service::Audio(const HttpRequest& request,
                                            const std::string& audio_id) {
  PREFEVAL_ASSIGN_OR_RETURN(std::string rater_id, Authenticate(request));
  AudioHandle handle;
  {
    std::lock_guard<std::mutex> lock(session_mu_);
    auto it = audio_.find(audio_id);
    if (it == audio_.end() || it->second.rater_id != rater_id) {
      return NotFound("unknown audio id");
    }
    handle = it->second;
  }
  absl::string_view path = handle.uri;
  absl::ConsumePrefix(&path, "file://");
  if (absl::StrContains(path, "://")) {
    return NotFound("audio is not stored locally");
  }
  std::ifstream file{std::string(path), std::ios::binary};
  if (!file) return NotFound("audio file unavailable");
  std::ostringstream bytes;
  bytes << file.rdbuf();
  HttpResponse response;
  response.content_type = ContentTypeFor(path);
  response.body = bytes.str();
  return response;
}

absl::StatusOr<HttpResponse> Service::Cached(
    const HttpRequest& request,
    const std::function<absl::StatusOr<HttpResponse>(const storage::PreferenceLog&)>&
        compute) {
  std::string key = request.path;
  for (const auto& [name, value] : request.query) {
    absl::StrAppend(&key, "&", name, "=", value);
  }
  const std::shared_ptr<const storage::PreferenceLog> snapshot = Snapshot();
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = cache_.find(key);
    if (it != cache_.end() && it->second.log_size == snapshot->size()) {
      return it->second.response;
    }
  }
  // Computed outside the lock so ingestion and other queries proceed.
  absl::StatusOr<HttpResponse> response = compute(*snapshot);
  if (!response.ok()) return response;
  std::lock_guard<std::mutex> lock(cache_mu_);
  CacheEntry& entry = cache_[key];
  if (entry.log_size <= snapshot->size()) entry = {snapshot->size(), *response};
  return response;
}

absl::StatusOr<HttpResponse> Service::Leaderboard(const HttpRequest& request) {
  PREFEVAL_RETURN_IF_ERROR(CheckQuery(
      request, {"language", "domain", "subset", "systems", "seed", "replicates"}));
  PREFEVAL_ASSIGN_OR_RETURN(bt::SubgroupFilter filter, QueryFilter(request));
  bt::LeaderboardConfig config;
  PREFEVAL_ASSIGN_OR_RETURN(config.bootstrap.seed,
                            QueryNumber<std::uint64_t>(request, "seed", config_.seed));
  PREFEVAL_ASSIGN_OR_RETURN(
      config.bootstrap.replicates,
      QueryNumber<int>(request, "replicates", config_.replicates));
  config.bootstrap.num_threads = config_.num_threads;
  return Cached(request, [&](const storage::PreferenceLog& log)
                             -> absl::StatusOr<HttpResponse> {
    absl::StatusOr<bt::Leaderboard> board = bt::BuildLeaderboard(log, filter, config);
    if (!board.ok()) {
      if (ErrorCodeOf(board.status()) == errc::kNonIdentifiable) {
        Json counts = Json::object();
        for (const auto& [id, count] : bt::ComparisonCounts(log, filter)) {
          counts[id] = count;
        }
        return ErrorResponse(board.status(), Json{{"comparisons", counts}});
      }
      return board.status();
    }
    return JsonResponse(200, bt::LeaderboardToJson(*board, &registry_));
  });
}

absl::StatusOr<HttpResponse> Service::WinRates(const HttpRequest& request) {
  PREFEVAL_RETURN_IF_ERROR(CheckQuery(
      request, {"language", "domain", "subset", "systems", "axes"}));
  PREFEVAL_ASSIGN_OR_RETURN(bt::SubgroupFilter filter, QueryFilter(request));
  const std::string axes = QueryValue(request, "axes");
  if (!axes.empty() && axes != "0" && axes != "1") {
    return InvalidError(errc::kInvalidArgument, "axes must be 0 or 1");
  }
  return Cached(request, [&](const storage::PreferenceLog& log)
                             -> absl::StatusOr<HttpResponse> {
    Json body;
    body["filter"] = filter.Key();
    body["log_size"] = log.size();
    Json rows = Json::array();
    if (axes == "1") {
      PREFEVAL_ASSIGN_OR_RETURN(auto rates, bt::PerAxisWinRates(log, filter));
      for (const bt::AxisWinRates& rate : rates) {
        Json row{{"system_id", rate.system_id},
                 {"n_comparisons", rate.n_comparisons}};
        for (int k = 0; k < kNumAxes; ++k) {
          row[std::string(ToString(kAllAxes[k]))] = rate.win_rate_pct[k];
        }
        rows.push_back(std::move(row));
      }
    } else {
      PREFEVAL_ASSIGN_OR_RETURN(auto rates, bt::WinRates(log, filter));
      for (const bt::SystemWinRate& rate : rates) {
        rows.push_back({{"system_id", rate.system_id},
                        {"win_rate_pct", rate.win_rate_pct},
                        {"n_comparisons", rate.n_comparisons}});
      }
    }
    body["win_rates"] = std::move(rows);
    return JsonResponse(200, body);
  });
}

absl::StatusOr<HttpResponse> Service::ReliabilityCurves(const HttpRequest& request) {
  PREFEVAL_RETURN_IF_ERROR(CheckQuery(
      request, {"mode", "grid", "systems", "trials", "replicates", "seed",
                "fixed_raters", "reference"}));
  const std::string mode = QueryValue(request, "mode");
  if (mode != "raters" && mode != "sentences") {
    return InvalidError(errc::kInvalidArgument, "mode must be raters or sentences");
  }
  reliability::ReliabilityOptions options;
  PREFEVAL_ASSIGN_OR_RETURN(options.grid, QueryIntList(request, "grid"));
  PREFEVAL_ASSIGN_OR_RETURN(bt::SubgroupFilter systems,
                            bt::ParseFilter("", "", "", QueryValue(request, "systems")));
  options.systems = systems.systems;
  PREFEVAL_ASSIGN_OR_RETURN(
      options.trials, QueryNumber<int>(request, "trials", config_.reliability_trials));
  PREFEVAL_ASSIGN_OR_RETURN(
      options.bootstrap_replicates,
      QueryNumber<int>(request, "replicates", config_.reliability_replicates));
  PREFEVAL_ASSIGN_OR_RETURN(options.seed,
                            QueryNumber<std::uint64_t>(request, "seed", config_.seed));
  PREFEVAL_ASSIGN_OR_RETURN(
      options.fixed_raters,
      QueryNumber<int>(request, "fixed_raters", options.fixed_raters));
  const std::string reference = QueryValue(request, "reference");
  if (reference == "fixed_raters") {
    options.reference = reliability::Reference::kFixedRaters;
  } else if (!reference.empty() && reference != "full_data") {
    return InvalidError(errc::kInvalidArgument,
                        "reference must be full_data or fixed_raters");
  }
  options.num_threads = config_.num_threads;
  return Cached(request, [&](const storage::PreferenceLog& log)
                             -> absl::StatusOr<HttpResponse> {
    PREFEVAL_ASSIGN_OR_RETURN(
        reliability::ReliabilityCurve curve,
        mode == "raters" ? reliability::RaterSubsampleCurve(log, options)
                         : reliability::SentenceSubsampleCurve(log, options));
    Json body = reliability::CurveToJson(curve);
    body["seed"] = options.seed;
    body["log_size"] = log.size();
    return JsonResponse(200, body);
  });
}

absl::StatusOr<HttpResponse> Service::ShapleyReport(const HttpRequest& request) {
  PREFEVAL_RETURN_IF_ERROR(
      CheckQuery(request, {"train_languages", "include_ties", "seed"}));
  PREFEVAL_ASSIGN_OR_RETURN(std::set<LanguageCode> languages,
                            QueryLanguages(request, "train_languages"));
  interpret::FeatureOptions features;
  features.include_overall_ties = QueryValue(request, "include_ties") == "1";
  PREFEVAL_ASSIGN_OR_RETURN(std::uint64_t seed,
                            QueryNumber<std::uint64_t>(request, "seed", config_.seed));
  return Cached(request, [&](const storage::PreferenceLog& log)
                             -> absl::StatusOr<HttpResponse> {
    const std::vector<interpret::FeatureRow> rows =
        interpret::BuildFeatureDataset(log, features);
    PREFEVAL_ASSIGN_OR_RETURN(
        interpret::PreferenceModel model,
        interpret::TrainPreferenceClassifier(rows, languages, {}, seed));
    std::vector<interpret::FeatureRow> training;
    for (const interpret::FeatureRow& row : rows) {
      if (languages.empty() || languages.contains(row.language)) {
        training.push_back(row);
      }
    }
    const interpret::ShapleyExplainer explainer(model.table(),
                                                std::span(training));
    const interpret::ShapleyReport report = interpret::MeanAbsShapleyParallel(
        explainer, training, config_.num_threads);
    Json body;
    body["log_size"] = log.size();
    body["model"] = model.ToJson();
    body["shapley"] = interpret::ShapleyReportToJson(report, false);
    return JsonResponse(200, body);
  });
}

HttpResponse Service::Health() const {
  return JsonResponse(200, Json{{"status", "ok"},
                                {"log_size", log_size()},
                                {"systems", registry_.manifest().systems.size()}});
}

}  // namespace prefeval::service
