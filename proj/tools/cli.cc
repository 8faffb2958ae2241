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

#include "prefeval/cli/cli.h"

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/time/clock.h"
#include "prefeval/bt/leaderboard.h"
#include "prefeval/bt/subgroup.h"
#include "prefeval/bt/win_rates.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/status_macros.h"
#include "prefeval/interpret/classifier.h"
#include "prefeval/interpret/features.h"
#include "prefeval/interpret/shapley.h"
#include "prefeval/reliability/curves.h"
#include "prefeval/service/service.h"
#include "prefeval/sim/simulator.h"
#include "prefeval/storage/json_codec.h"
#include "prefeval/storage/log_io.h"
#include "prefeval/storage/manifest_io.h"

namespace prefeval::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Flags {
  std::string manifest;
  std::string log;
  std::string language, domain, subset, systems;
  int replicates = 500;
  int reliability_replicates = 100;
  std::optional<std::uint64_t> seed;
  double pseudo_count = 0.0;
  std::string format = "table";
  std::string out;
  int jobs = 0;
  bool strict_repro = false;

  // interpret
  std::string train_languages, holdout_languages, model;
  bool include_ties = false;

  // reliability
  std::vector<int> grid;
  int trials = 20;
  int fixed_raters = 200;
  std::string reference = "full_data";
  double threshold = 0.95;

  // simulate
  std::string spec;
  std::string manifest_out, log_out;

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

absl::Status Emit(const Flags& flags, const std::string& text, std::ostream& out) {
  if (flags.out.empty()) {
    out << text;
    return absl::OkStatus();
  }
  return storage::WriteFile(flags.out, text);
}

std::uint64_t RequireSeed(const Flags& flags, absl::string_view command) {
  if (flags.strict_repro && !flags.seed.has_value()) {
    throw UsageError(absl::StrCat(command, " is stochastic; --strict-repro needs --seed"));
  }
  return flags.seed.value_or(0);
}

absl::StatusOr<Registry> LoadRegistry(const Flags& flags) {
  if (flags.manifest.empty()) throw UsageError("--manifest is required");
  return storage::LoadManifest(flags.manifest);
}

absl::StatusOr<storage::PreferenceLog> LoadLog(const Flags& flags,
                                               const Registry& registry) {
  if (flags.log.empty()) throw UsageError("--log is required");
  return storage::ReadLog(flags.log, registry);
}

absl::StatusOr<bt::SubgroupFilter> FilterFrom(const Flags& flags) {
  return bt::ParseFilter(flags.language, flags.domain, flags.subset, flags.systems);
}

absl::StatusOr<std::set<LanguageCode>> Languages(const std::string& csv) {
  std::set<LanguageCode> languages;
  for (absl::string_view code : absl::StrSplit(csv, ',', absl::SkipWhitespace())) {
    PREFEVAL_ASSIGN_OR_RETURN(LanguageCode language, LanguageCode::Parse(code));
    languages.insert(std::move(language));
  }
  return languages;
}

std::string Csv(const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  for (const auto& row : rows) absl::StrAppend(&text, absl::StrJoin(row, ","), "\n");
  return text;
}

// Left-aligned first column, right-aligned rest.
std::string Table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string text;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) text += "  ";
      const std::string pad(width[c] - row[c].size(), ' ');
      text += c == 0 ? row[c] + pad : pad + row[c];
    }
    text += "\n";
  }
  return text;
}

std::string Render(const Flags& flags, const Json& json,
                   const std::vector<std::vector<std::string>>& rows) {
  if (flags.format == "json") return json.dump(2) + "\n";
  if (flags.format == "csv") return Csv(rows);
  return Table(rows);
}

absl::Status Leaderboard(const Flags& flags, std::ostream& out) {
  const std::uint64_t seed = RequireSeed(flags, "leaderboard");
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, LoadRegistry(flags));
  PREFEVAL_ASSIGN_OR_RETURN(storage::PreferenceLog log, LoadLog(flags, registry));
  PREFEVAL_ASSIGN_OR_RETURN(bt::SubgroupFilter filter, FilterFrom(flags));
  bt::LeaderboardConfig config;
  config.bootstrap.seed = seed;
  config.bootstrap.replicates = flags.replicates;
  config.bootstrap.num_threads = flags.jobs;
  config.bootstrap.fit.pseudo_count = flags.pseudo_count;
  PREFEVAL_ASSIGN_OR_RETURN(bt::Leaderboard board,
                            bt::BuildLeaderboard(log, filter, config));
  std::string text;
  if (flags.format == "json") {
    text = bt::LeaderboardToJson(board, &registry).dump(2) + "\n";
  } else if (flags.format == "csv") {
    text = bt::LeaderboardToCsv(board, &registry);
  } else {
    text = bt::LeaderboardToTable(board, &registry);
  }
  return Emit(flags, text, out);
}

absl::Status WinRates(const Flags& flags, std::ostream& out) {
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, LoadRegistry(flags));
  PREFEVAL_ASSIGN_OR_RETURN(storage::PreferenceLog log, LoadLog(flags, registry));
  PREFEVAL_ASSIGN_OR_RETURN(bt::SubgroupFilter filter, FilterFrom(flags));
  PREFEVAL_ASSIGN_OR_RETURN(auto rates, bt::WinRates(log, filter));
  Json json = {{"filter", filter.Key()}, {"win_rates", Json::array()}};
  std::vector<std::vector<std::string>> rows = {
      {"system_id", "win_rate_pct", "n_comparisons"}};
  for (const bt::SystemWinRate& rate : rates) {
    json["win_rates"].push_back({{"system_id", rate.system_id},
                                 {"win_rate_pct", rate.win_rate_pct},
                                 {"n_comparisons", rate.n_comparisons}});
    rows.push_back({rate.system_id, absl::StrFormat("%.2f", rate.win_rate_pct),
                    absl::StrCat(rate.n_comparisons)});
  }
  return Emit(flags, Render(flags, json, rows), out);
}

absl::Status AxisWinRates(const Flags& flags, std::ostream& out) {
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, LoadRegistry(flags));
  PREFEVAL_ASSIGN_OR_RETURN(storage::PreferenceLog log, LoadLog(flags, registry));
  PREFEVAL_ASSIGN_OR_RETURN(bt::SubgroupFilter filter, FilterFrom(flags));
  PREFEVAL_ASSIGN_OR_RETURN(auto rates, bt::PerAxisWinRates(log, filter));
  Json json = {{"filter", filter.Key()}, {"win_rates", Json::array()}};
  std::vector<std::string> header = {"system_id"};
  for (AxisId axis : kAllAxes) header.emplace_back(ToString(axis));
  header.push_back("n_comparisons");
  std::vector<std::vector<std::string>> rows = {header};
  for (const bt::AxisWinRates& rate : rates) {
    Json row = {{"system_id", rate.system_id}};
    std::vector<std::string> cells = {rate.system_id};
    for (int k = 0; k < kNumAxes; ++k) {
      row[std::string(ToString(kAllAxes[k]))] = rate.win_rate_pct[k];
      cells.push_back(absl::StrFormat("%.2f", rate.win_rate_pct[k]));
    }
    row["n_comparisons"] = rate.n_comparisons;
    cells.push_back(absl::StrCat(rate.n_comparisons));
    json["win_rates"].push_back(std::move(row));
    rows.push_back(std::move(cells));
  }
  return Emit(flags, Render(flags, json, rows), out);
}

std::vector<interpret::FeatureRow> Rows(const Flags& flags,
                                        const storage::PreferenceLog& log) {
  interpret::FeatureOptions options;
  options.include_overall_ties = flags.include_ties;
  return interpret::BuildFeatureDataset(log, options);
}

absl::StatusOr<interpret::PreferenceModel> LoadModel(const Flags& flags) {
  if (flags.model.empty()) throw UsageError("--model is required");
  PREFEVAL_ASSIGN_OR_RETURN(std::string text, storage::ReadFile(flags.model));
  PREFEVAL_ASSIGN_OR_RETURN(Json json, storage::ParseJson(text));
  return interpret::PreferenceModel::FromJson(json);
}

absl::Status InterpretTrain(const Flags& flags, std::ostream& out) {
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, LoadRegistry(flags));
  PREFEVAL_ASSIGN_OR_RETURN(storage::PreferenceLog log, LoadLog(flags, registry));
  PREFEVAL_ASSIGN_OR_RETURN(std::set<LanguageCode> languages,
                            Languages(flags.train_languages));
  PREFEVAL_ASSIGN_OR_RETURN(
      interpret::PreferenceModel model,
      interpret::TrainPreferenceClassifier(Rows(flags, log), languages, {},
                                           flags.seed.value_or(0)));
  return Emit(flags, model.ToJson().dump(2) + "\n", out);
}

absl::Status InterpretEval(const Flags& flags, std::ostream& out) {
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, LoadRegistry(flags));
  PREFEVAL_ASSIGN_OR_RETURN(storage::PreferenceLog log, LoadLog(flags, registry));
  PREFEVAL_ASSIGN_OR_RETURN(interpret::PreferenceModel model, LoadModel(flags));
  PREFEVAL_ASSIGN_OR_RETURN(std::set<LanguageCode> holdout,
                            Languages(flags.holdout_languages));
  PREFEVAL_ASSIGN_OR_RETURN(
      interpret::CrossLingualReport report,
      interpret::EvaluateCrossLingual(model, Rows(flags, log), holdout));
  std::vector<std::vector<std::string>> rows = {{"language", "accuracy", "n"}};
  for (const auto& [language, accuracy] : report.per_language) {
    rows.push_back({language.code(), absl::StrFormat("%.4f", accuracy.accuracy),
                    absl::StrFormat("%g", accuracy.n)});
  }
  rows.push_back({"pooled", absl::StrFormat("%.4f", report.pooled_accuracy),
                  absl::StrFormat("%g", report.n)});
  return Emit(flags, Render(flags, interpret::CrossLingualToJson(report), rows),
              out);
}

absl::Status InterpretShap(const Flags& flags, std::ostream& out) {
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, LoadRegistry(flags));
  PREFEVAL_ASSIGN_OR_RETURN(storage::PreferenceLog log, LoadLog(flags, registry));
  PREFEVAL_ASSIGN_OR_RETURN(interpret::PreferenceModel model, LoadModel(flags));
  std::vector<interpret::FeatureRow> rows;
  for (const interpret::FeatureRow& row : Rows(flags, log)) {
    if (model.training_languages().empty() ||
        model.training_languages().contains(row.language)) {
      rows.push_back(row);
    }
  }
  if (rows.empty()) {
    return InvalidError(errc::kEmptyLog, "no rows in the model's training languages");
  }
  const interpret::ShapleyExplainer explainer(model.table(), std::span(rows));
  const interpret::ShapleyReport report =
      interpret::MeanAbsShapleyParallel(explainer, rows, flags.jobs);
  std::vector<std::vector<std::string>> table = {{"axis", "mean_abs_phi"}};
  for (AxisId axis : report.ordering) {
    table.push_back({std::string(ToString(axis)),
                     absl::StrFormat("%.6f", report.mean_abs_phi[static_cast<int>(axis)])});
  }
  return Emit(flags, Render(flags, interpret::ShapleyReportToJson(report, false), table),
              out);
}

absl::Status Reliability(const Flags& flags, reliability::CurveMode mode,
                         std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = RequireSeed(flags, "reliability");
  if (flags.grid.empty()) throw UsageError("--grid is required");
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, LoadRegistry(flags));
  PREFEVAL_ASSIGN_OR_RETURN(storage::PreferenceLog log, LoadLog(flags, registry));
  PREFEVAL_ASSIGN_OR_RETURN(bt::SubgroupFilter systems,
                            bt::ParseFilter("", "", "", flags.systems));
  reliability::ReliabilityOptions options;
  options.systems = systems.systems;
  options.grid = flags.grid;
  options.trials = flags.trials;
  options.bootstrap_replicates = flags.reliability_replicates;
  options.seed = seed;
  options.fixed_raters = flags.fixed_raters;
  options.reference = flags.reference == "fixed_raters"
                          ? reliability::Reference::kFixedRaters
                          : reliability::Reference::kFullData;
  options.fit.pseudo_count = flags.pseudo_count;
  options.num_threads = flags.jobs;
  if (options.bootstrap_replicates != 500) {
    err << "warning: reliability curves use " << options.bootstrap_replicates
        << " bootstrap replicates per trial; leaderboards use 500\n";
  }
  PREFEVAL_ASSIGN_OR_RETURN(
      reliability::ReliabilityCurve curve,
      mode == reliability::CurveMode::kRaters
          ? reliability::RaterSubsampleCurve(log, options)
          : reliability::SentenceSubsampleCurve(log, options));
  const auto threshold = reliability::FindThreshold(curve, flags.threshold);
  std::string text;
  if (flags.format == "json") {
    Json json = reliability::CurveToJson(curve);
    json["seed"] = seed;
    json["threshold"] = threshold.has_value()
                            ? Json{{"target_rho", flags.threshold},
                                   {"axis_value", threshold->axis_value},
                                   {"mean_ci_width", threshold->mean_ci_width}}
                            : Json(nullptr);
    text = json.dump(2) + "\n";
  } else if (flags.format == "csv") {
    text = reliability::CurveToCsv(curve);
  } else {
    std::vector<std::vector<std::string>> rows = {
        {mode == reliability::CurveMode::kRaters ? "raters" : "sentences",
         "mean_rho", "rho_std", "mean_ci_width", "redraws"}};
    for (const reliability::ReliabilityPoint& p : curve.grid) {
      rows.push_back({absl::StrCat(p.axis_value), absl::StrFormat("%.4f", p.mean_rho),
                      absl::StrFormat("%.4f", p.rho_std),
                      absl::StrFormat("%.2f", p.mean_ci_width),
                      absl::StrCat(p.redraws)});
    }
    text = Table(rows);
    if (threshold.has_value()) {
      absl::StrAppendFormat(&text, "rho >= %.2f first reached at %d (mean CI width %.2f)\n",
                            flags.threshold, threshold->axis_value,
                            threshold->mean_ci_width);
    } else {
      absl::StrAppendFormat(&text, "rho >= %.2f not reached on this grid\n",
                            flags.threshold);
    }
  }
  return Emit(flags, text, out);
}

absl::Status Simulate(const Flags& flags, std::ostream& out) {
  if (flags.spec.empty()) throw UsageError("--spec is required");
  if (flags.manifest_out.empty() || flags.log_out.empty()) {
    throw UsageError("--manifest-out and --log-out are required");
  }
  if (flags.strict_repro) RequireSeed(flags, "simulate");
  PREFEVAL_ASSIGN_OR_RETURN(std::string text, storage::ReadFile(flags.spec));
  PREFEVAL_ASSIGN_OR_RETURN(Json json, storage::ParseJson(text));
  PREFEVAL_ASSIGN_OR_RETURN(sim::WorldSpec spec, sim::SpecFromJson(json));
  if (flags.seed.has_value()) spec.seed = *flags.seed;
  PREFEVAL_ASSIGN_OR_RETURN(sim::SimulatedWorld world, sim::RunSimulation(spec));
  PREFEVAL_RETURN_IF_ERROR(storage::SaveManifest(world.manifest, flags.manifest_out));
  // A fresh file, so reruns do not collide on record ids.
  PREFEVAL_RETURN_IF_ERROR(storage::WriteFile(flags.log_out, ""));
  PREFEVAL_RETURN_IF_ERROR(storage::WriteLog(world.log, flags.log_out));
  Json summary = {{"seed", spec.seed},
                  {"systems", world.manifest.systems.size()},
                  {"raters", world.manifest.raters.size()},
                  {"sentences", world.manifest.sentences.size()},
                  {"records", world.log.size()},
                  {"true_ratings", Json::array()}};
  std::vector<std::vector<std::string>> rows = {{"system_id", "true_rating"}};
  for (std::size_t s = 0; s < world.manifest.systems.size(); ++s) {
    summary["true_ratings"].push_back({{"system_id", world.manifest.systems[s].id},
                                       {"rating", world.true_ratings[s]}});
    rows.push_back({world.manifest.systems[s].id,
                    absl::StrFormat("%.2f", world.true_ratings[s])});
  }
  rows.push_back({"records", absl::StrCat(world.log.size())});
  return Emit(flags, Render(flags, summary, rows), out);
}

absl::Status ValidateLog(const Flags& flags, std::ostream& out) {
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, LoadRegistry(flags));
  PREFEVAL_ASSIGN_OR_RETURN(storage::PreferenceLog log, LoadLog(flags, registry));
  return Emit(flags, absl::StrCat("ok: ", log.size(), " records\n"), out);
}

absl::Status Serve(const Flags& flags, std::ostream& out) {
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, LoadRegistry(flags));
  if (flags.log.empty()) throw UsageError("--log is required");
  storage::PreferenceLog existing;
  std::ifstream probe(flags.log);
  if (probe.good()) {
    PREFEVAL_ASSIGN_OR_RETURN(existing, storage::ReadLog(flags.log, registry));
  }
  PREFEVAL_ASSIGN_OR_RETURN(storage::LogWriter writer,
                            storage::LogWriter::Open(flags.log));
  service::ServiceConfig config;
  config.seed = flags.seed.value_or(0);
  config.replicates = flags.replicates;
  config.num_threads = flags.jobs;
  config.scheduler.seed = config.seed;
  service::Service service(std::move(registry), std::move(existing), config,
                           [] { return absl::Now(); }, std::move(writer));
  service::HttpServer server(service);
  PREFEVAL_ASSIGN_OR_RETURN(int port, server.Start(flags.host, flags.port));
  out << "listening on " << flags.host << ":" << port << std::endl;
  server.Wait();
  return absl::OkStatus();
}

void AddInputs(CLI::App* app, Flags& flags) {
  app->add_option("--manifest", flags.manifest, "manifest.json");
  app->add_option("--log", flags.log, "preference log (JSON Lines)");
}

void AddFilter(CLI::App* app, Flags& flags) {
  app->add_option("--language", flags.language, "ISO 639-3 language code");
  app->add_option("--domain", flags.domain, "sentence domain");
  app->add_option("--subset", flags.subset, "normalized | symbolic | codemixed");
  app->add_option("--systems", flags.systems, "comma-separated system ids");
}

void AddOutput(CLI::App* app, Flags& flags) {
  app->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"json", "table", "csv"}));
  app->add_option("--out", flags.out, "write output to this file");
}

void AddStatistics(CLI::App* app, Flags& flags, int& replicates) {
  app->add_option("--replicates", replicates, "bootstrap replicates")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", flags.seed, "random seed");
  app->add_option("--pseudo-count", flags.pseudo_count,
                  "added to every off-diagonal win count")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Flags flags;
  CLI::App app{"Pairwise preference evaluation: leaderboards, interpretability, "
               "reliability and simulation."};
  app.name(args.empty() ? "prefeval" : args[0]);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--jobs", flags.jobs, "OpenMP threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--strict-repro", flags.strict_repro,
               "require --seed for stochastic commands");

  CLI::App* leaderboard = app.add_subcommand("leaderboard", "BT ratings with bootstrap CIs");
  AddInputs(leaderboard, flags);
  AddFilter(leaderboard, flags);
  AddStatistics(leaderboard, flags, flags.replicates);
  AddOutput(leaderboard, flags);

  CLI::App* winrates = app.add_subcommand("winrates", "overall win rates");
  AddInputs(winrates, flags);
  AddFilter(winrates, flags);
  AddOutput(winrates, flags);

  CLI::App* axes = app.add_subcommand("axes-winrates", "win rates per perceptual axis");
  AddInputs(axes, flags);
  AddFilter(axes, flags);
  AddOutput(axes, flags);

  CLI::App* interpret = app.add_subcommand("interpret", "axis-level preference model");
  interpret->require_subcommand(1);
  CLI::App* train = interpret->add_subcommand("train", "fit the model");
  CLI::App* eval = interpret->add_subcommand("eval", "cross-lingual accuracy");
  CLI::App* shap = interpret->add_subcommand("shap", "mean |Shapley| per axis");
  for (CLI::App* sub : {train, eval, shap}) {
    AddInputs(sub, flags);
    AddOutput(sub, flags);
    sub->add_flag("--include-ties", flags.include_ties,
                  "keep overall ties as negative labels");
  }
  train->add_option("--train-languages", flags.train_languages,
                    "comma-separated; default all");
  train->add_option("--seed", flags.seed, "recorded in the model");
  eval->add_option("--model", flags.model, "model JSON from interpret train");
  eval->add_option("--holdout-languages", flags.holdout_languages,
                   "comma-separated")
      ->required();
  shap->add_option("--model", flags.model, "model JSON from interpret train");

  CLI::App* reliability = app.add_subcommand("reliability", "subsampling curves");
  reliability->require_subcommand(1);
  CLI::App* raters = reliability->add_subcommand("raters", "vary the rater pool");
  CLI::App* sentences = reliability->add_subcommand("sentences", "vary the sentence pool");
  for (CLI::App* sub : {raters, sentences}) {
    AddInputs(sub, flags);
    AddOutput(sub, flags);
    AddStatistics(sub, flags, flags.reliability_replicates);
    sub->add_option("--systems", flags.systems, "comma-separated system ids");
    sub->add_option("--grid", flags.grid, "subsample sizes")->delimiter(',');
    sub->add_option("--trials", flags.trials, "subsamples per grid point")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threshold", flags.threshold, "target mean rho");
  }
  sentences->add_option("--fixed-raters", flags.fixed_raters, "rater pool size")
      ->check(CLI::PositiveNumber);
  sentences->add_option("--reference", flags.reference, "correlation reference")
      ->check(CLI::IsMember({"full_data", "fixed_raters"}));

  CLI::App* simulate = app.add_subcommand("simulate", "synthetic world and log");
  simulate->add_option("--spec", flags.spec, "world spec JSON");
  simulate->add_option("--manifest-out", flags.manifest_out, "manifest to write");
  simulate->add_option("--log-out", flags.log_out, "log to write");
  simulate->add_option("--seed", flags.seed, "overrides the seed in the world file");
  AddOutput(simulate, flags);

  CLI::App* validate = app.add_subcommand("validate-log", "check every log line");
  AddInputs(validate, flags);

  CLI::App* serve = app.add_subcommand("serve", "HTTP service");
  AddInputs(serve, flags);
  serve->add_option("--host", flags.host, "bind address");
  serve->add_option("--port", flags.port, "port (0: any free port)");
  serve->add_option("--seed", flags.seed, "scheduler and default bootstrap seed");
  serve->add_option("--replicates", flags.replicates, "default bootstrap replicates");

  std::vector<const char*> argv;
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* active = &app;
    for (CLI::App* sub = &app; !sub->get_subcommands().empty();) {
      sub = sub->get_subcommands().front();
      active = sub;
    }
    err << active->help();
    return kExitUsage;
  }

  absl::Status status;
  try {
    if (leaderboard->parsed()) {
      status = Leaderboard(flags, out);
    } else if (winrates->parsed()) {
      status = WinRates(flags, out);
    } else if (axes->parsed()) {
      status = AxisWinRates(flags, out);
    } else if (train->parsed()) {
      status = InterpretTrain(flags, out);
    } else if (eval->parsed()) {
      status = InterpretEval(flags, out);
    } else if (shap->parsed()) {
      status = InterpretShap(flags, out);
    } else if (raters->parsed()) {
      status = Reliability(flags, reliability::CurveMode::kRaters, out, err);
    } else if (sentences->parsed()) {
      status = Reliability(flags, reliability::CurveMode::kSentences, out, err);
    } else if (simulate->parsed()) {
      status = Simulate(flags, out);
    } else if (validate->parsed()) {
      status = ValidateLog(flags, out);
    } else if (serve->parsed()) {
      status = Serve(flags, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!status.ok()) {
    err << "error [" << ErrorCodeOf(status) << "]: " << status.message() << "\n";
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace prefeval::cli
