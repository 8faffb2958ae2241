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

#ifndef PREFEVAL_SERVICE_SERVICE_H_
#define PREFEVAL_SERVICE_SERVICE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/time/time.h"
#include "json.hpp"
#include "prefeval/core/registry.h"
#include "prefeval/scheduler/scheduler.h"
#include "prefeval/storage/log_io.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace prefeval::service {

struct HttpRequest {
  std::string method;
  // Path without the query string.
  std::string path;
  std::map<std::string, std::string> query;
  // Header names in lower case.
  std::map<std::string, std::string> headers;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// HTTP status for a machine-readable error code.
int HttpStatusFor(absl::string_view error_code);

struct ServiceConfig {
  // Default bootstrap seed for analytics queries; a query may override it.
  std::uint64_t seed = 0;
  int replicates = 500;
  int reliability_replicates = 100;
  int reliability_trials = 20;
  absl::Duration session_ttl = absl::Hours(12);
  // Plan target per (language, pair) cell; 0 leaves only quotas binding.
  int target_per_cell = 0;
  scheduler::SchedulerOptions scheduler;
  // OpenMP threads for analytics; 0 uses the runtime default.
  int num_threads = 0;
};

// Routes requests to the scheduler and the analytics engines. Thread-safe:
// the scheduler serializes task state, analytics read immutable snapshots
// of the log, and cached bodies are keyed by (query, log length).
class Service {
 public:
  using TokenSource = std::function<std::string()>;

  // `writer`, when given, receives every completed record before it becomes
  // visible to queries. `existing` is the log read at startup.
  Service(Registry registry, storage::PreferenceLog existing, ServiceConfig config,
          scheduler::Clock clock,
          std::optional<storage::LogWriter> writer = std::nullopt,
          TokenSource tokens = nullptr);

  HttpResponse Handle(const HttpRequest& request);

  std::size_t log_size() const;
  std::shared_ptr<const storage::PreferenceLog> Snapshot() const;
  const Registry& registry() const { return registry_; }

 private:
  struct Session {
    std::string rater_id;
    absl::Time expiry;
  };
  struct AudioHandle {
    std::string rater_id;
    std::string uri;
  };
  struct CacheEntry {
    std::size_t log_size = 0;
    HttpResponse response;
  };

  absl::StatusOr<std::string> Authenticate(const HttpRequest& request) const;
  nlohmann::ordered_json TaskView(const scheduler::Task& task);
  absl::Status Append(const ComparisonRecord& record);

  absl::StatusOr<HttpResponse> CreateSession(const HttpRequest& request);
  absl::StatusOr<HttpResponse> NextTask(const HttpRequest& request);
  absl::StatusOr<HttpResponse> SubmitOverall(const HttpRequest& request,
                                             const std::string& task_id);
  absl::StatusOr<HttpResponse> SubmitAxes(const HttpRequest& request,
                                          const std::string& task_id);
  absl::StatusOr<HttpResponse> Audio(const HttpRequest& request,
                                     const std::string& audio_id);
  absl::StatusOr<HttpResponse> Leaderboard(const HttpRequest& request);
  absl::StatusOr<HttpResponse> WinRates(const HttpRequest& request);
  absl::StatusOr<HttpResponse> ReliabilityCurves(const HttpRequest& request);
  absl::StatusOr<HttpResponse> ShapleyReport(const HttpRequest& request);
  HttpResponse Health() const;

  // Serves `compute` through the cache.
  absl::StatusOr<HttpResponse> Cached(
      const HttpRequest& request,
      const std::function<absl::StatusOr<HttpResponse>(
          const storage::PreferenceLog&)>& compute);

  const Registry registry_;
  const ServiceConfig config_;
  const scheduler::Clock clock_;
  TokenSource tokens_;
  std::unique_ptr<scheduler::Scheduler> scheduler_;

  mutable std::mutex log_mu_;
  std::optional<storage::LogWriter> writer_;
  storage::PreferenceLog log_;
  mutable std::shared_ptr<const storage::PreferenceLog> snapshot_;

  mutable std::mutex session_mu_;
  std::map<std::string, Session> sessions_;
  // Opaque audio id -> owner and location; task id -> its two audio ids.
  std::map<std::string, AudioHandle> audio_;
  std::map<std::string, std::pair<std::string, std::string>> task_audio_;

  std::mutex cache_mu_;
  std::map<std::string, CacheEntry> cache_;
};

// JSON-over-HTTP front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port.
  absl::StatusOr<int> Start(const std::string& host, int port);
  void Stop();
  // Blocks until the server stops.
  void Wait();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace prefeval::service

#endif  // PREFEVAL_SERVICE_SERVICE_H_
