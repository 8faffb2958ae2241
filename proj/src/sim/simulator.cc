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

#include "prefeval/sim/simulator.h"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/time/time.h"
#include "prefeval/core/errors.h"
#include "prefeval/core/status_macros.h"
#include "prefeval/core/validate.h"
#include "prefeval/scheduler/pair_plan.h"
#include "prefeval/scheduler/scheduler.h"

namespace prefeval::sim {
namespace {

using Json = nlohmann::ordered_json;
using scheduler::NextTaskResult;
using scheduler::PairPlan;
using scheduler::Scheduler;
using scheduler::SchedulerOptions;
using scheduler::Task;

constexpr std::int64_t kStartMillis = 1767225600000;  // 2026-01-01T00:00:00Z

double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double Rating(const WorldSpec& spec, int i) {
  return spec.true_ratings.empty() ? 1000.0 : spec.true_ratings[i];
}

double Quality(const WorldSpec& spec, int system, int axis) {
  return spec.axis_quality.empty() ? 0.5 : spec.axis_quality[system][axis];
}

Choice Draw(Rng& rng, double p_a) {
  return UniformUnit(rng) < p_a ? Choice::kA : Choice::kB;
}

}  // namespace

absl::Status ValidateSpec(const WorldSpec& spec) {
  auto bad = [](std::string message) {
    return InvalidError(errc::kInvalidArgument, std::move(message));
  };
  if (spec.n_systems < 2) return bad("n_systems must be >= 2");
  if (!spec.true_ratings.empty()) {
    if (static_cast<int>(spec.true_ratings.size()) != spec.n_systems) {
      return bad("true_ratings must have n_systems entries");
    }
    const double mean =
        std::accumulate(spec.true_ratings.begin(), spec.true_ratings.end(), 0.0) /
        spec.n_systems;
    if (std::abs(mean - 1000.0) > 1e-6) {
      return bad(absl::StrFormat("true_ratings mean is %.6f, not 1000", mean));
    }
  }
  if (!spec.axis_quality.empty()) {
    if (static_cast<int>(spec.axis_quality.size()) != spec.n_systems) {
      return bad("axis_quality must have n_systems rows");
    }
    for (const AxisVector& row : spec.axis_quality) {
      for (double q : row) {
        if (!(q >= 0.0 && q <= 1.0)) return bad("axis_quality outside [0, 1]");
      }
    }
  }
  double weight_sum = 0.0;
  for (double w : spec.axis_weights) {
    if (!(w >= 0.0)) return bad("axis_weights must be nonnegative");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) return bad("axis_weights must sum to 1");
  if (!(spec.rater_noise >= 0.0)) return bad("rater_noise must be >= 0");
  if (!(spec.tie_rate >= 0.0 && spec.tie_rate < 1.0)) {
    return bad("tie_rate must be in [0, 1)");
  }
  if (!(spec.axis_tie_rate >= 0.0 && spec.axis_tie_rate <= 1.0)) {
    return bad("axis_tie_rate must be in [0, 1]");
  }
  if (spec.n_raters < 1) return bad("n_raters must be >= 1");
  if (spec.n_sentences < 1) return bad("n_sentences must be >= 1");
  if (spec.languages.empty()) return bad("languages must not be empty");
  if (std::set<LanguageCode>(spec.languages.begin(), spec.languages.end())
          .size() != spec.languages.size()) {
    return bad("duplicate language");
  }
  if (spec.domains.empty()) return bad("domains must not be empty");
  if (spec.quota_per_rater < 0 || spec.target_per_cell < 0) {
    return bad("quota_per_rater and target_per_cell must be >= 0");
  }
  return absl::OkStatus();
}

std::vector<double> EvenlySpacedRatings(int n, double gap) {
  std::vector<double> ratings(n);
  for (int i = 0; i < n; ++i) ratings[i] = 1000.0 + gap * ((n - 1) / 2.0 - i);
  return ratings;
}

absl::StatusOr<WorldSpec> SpecFromJson(const Json& json) {
  if (!json.is_object()) {
    return InvalidError(errc::kParseError, "world spec must be an object");
  }
  static const std::set<std::string> kKnown = {
      "n_systems",     "true_ratings",    "axis_quality",   "axis_weights",
      "rater_noise",   "tie_rate",        "n_raters",       "n_sentences",
      "languages",     "domains",         "quota_per_rater", "target_per_cell",
      "axis_sharpness", "axis_tilt",      "axis_tie_rate",  "seed"};
  for (const auto& [key, value] : json.items()) {
    if (!kKnown.contains(key)) {
      return InvalidError(errc::kParseError,
                          absl::StrCat("unknown world spec field '", key, "'"));
    }
  }
  WorldSpec spec;
  try {
    spec.n_systems = json.value("n_systems", spec.n_systems);
    spec.true_ratings = json.value("true_ratings", spec.true_ratings);
    if (json.contains("axis_quality")) {
      for (const Json& row : json.at("axis_quality")) {
        spec.axis_quality.push_back(row.get<AxisVector>());
      }
    }
    if (json.contains("axis_weights")) {
      spec.axis_weights = json.at("axis_weights").get<AxisVector>();
    }
    spec.rater_noise = json.value("rater_noise", spec.rater_noise);
    spec.tie_rate = json.value("tie_rate", spec.tie_rate);
    spec.n_raters = json.value("n_raters", spec.n_raters);
    spec.n_sentences = json.value("n_sentences", spec.n_sentences);
    if (json.contains("languages")) {
      spec.languages.clear();
      for (const Json& code : json.at("languages")) {
        PREFEVAL_ASSIGN_OR_RETURN(LanguageCode language,
                                  LanguageCode::Parse(code.get<std::string>()));
        spec.languages.push_back(std::move(language));
      }
    }
    spec.domains = json.value("domains", spec.domains);
    spec.quota_per_rater = json.value("quota_per_rater", spec.quota_per_rater);
    spec.target_per_cell = json.value("target_per_cell", spec.target_per_cell);
    spec.axis_sharpness = json.value("axis_sharpness", spec.axis_sharpness);
    spec.axis_tilt = json.value("axis_tilt", spec.axis_tilt);
    spec.axis_tie_rate = json.value("axis_tie_rate", spec.axis_tie_rate);
    spec.seed = json.value("seed", spec.seed);
  } catch (const nlohmann::json::exception& e) {
    return InvalidError(errc::kParseError,
                        absl::StrCat("world spec: ", e.what()));
  }
  PREFEVAL_RETURN_IF_ERROR(ValidateSpec(spec));
  return spec;
}

Json SpecToJson(const WorldSpec& spec) {
  Json json;
  json["n_systems"] = spec.n_systems;
  json["true_ratings"] = spec.true_ratings;
  json["axis_quality"] = spec.axis_quality;
  json["axis_weights"] = spec.axis_weights;
  json["rater_noise"] = spec.rater_noise;
  json["tie_rate"] = spec.tie_rate;
  json["n_raters"] = spec.n_raters;
  json["n_sentences"] = spec.n_sentences;
  Json languages = Json::array();
  for (const LanguageCode& language : spec.languages) {
    languages.push_back(language.code());
  }
  json["languages"] = std::move(languages);
  json["domains"] = spec.domains;
  json["quota_per_rater"] = spec.quota_per_rater;
  json["target_per_cell"] = spec.target_per_cell;
  json["axis_sharpness"] = spec.axis_sharpness;
  json["axis_tilt"] = spec.axis_tilt;
  json["axis_tie_rate"] = spec.axis_tie_rate;
  json["seed"] = spec.seed;
  return json;
}

std::string SystemId(int index, int n_systems) {
  const int width = std::max(2, static_cast<int>(std::to_string(n_systems).size()));
  return absl::StrFormat("sys%0*d", width, index + 1);
}

absl::StatusOr<SimulatedWorld> GenerateWorld(const WorldSpec& spec) {
  PREFEVAL_RETURN_IF_ERROR(ValidateSpec(spec));
  SimulatedWorld world;
  world.spec = spec;
  world.axis_weights = spec.axis_weights;
  BenchmarkManifest& m = world.manifest;
  m.languages = spec.languages;
  m.domains = spec.domains;
  m.subsets.assign(kAllSubsets.begin(), kAllSubsets.end());
  m.audio_uri_template = "sim://{system}/{voice}/{sentence}";
  const std::set<LanguageCode> all(spec.languages.begin(), spec.languages.end());

  for (int s = 0; s < spec.n_systems; ++s) {
    SystemEntry system;
    system.id = SystemId(s, spec.n_systems);
    system.display_name = absl::StrCat("Synthetic system ", s + 1);
    system.supported_languages = all;
    for (Gender gender : {Gender::kMale, Gender::kFemale}) {
      VoiceEntry voice;
      voice.id = absl::StrCat(system.id, gender == Gender::kMale ? "_m" : "_f");
      voice.system_id = system.id;
      voice.gender = gender;
      voice.languages = all;
      system.voices.push_back(std::move(voice));
    }
    m.systems.push_back(std::move(system));
    world.true_ratings.push_back(Rating(spec, s));
  }

  for (const LanguageCode& language : spec.languages) {
    for (int i = 0; i < spec.n_sentences; ++i) {
      SentenceEntry sentence;
      sentence.id = absl::StrFormat("%s_%04d", language.code(), i);
      sentence.language = language;
      sentence.domain = spec.domains[i % spec.domains.size()];
      sentence.subset = kAllSubsets[i % kAllSubsets.size()];
      sentence.length_class = static_cast<LengthClass>((i / 3) % 3);
      sentence.text = absl::StrCat("synthetic ", language.code(), " sentence ", i);
      m.sentences.push_back(std::move(sentence));
    }
  }

  for (int r = 0; r < spec.n_raters; ++r) {
    RaterEntry rater;
    rater.id = absl::StrFormat("rater%04d", r + 1);
    rater.state = RaterState::kActive;
    rater.gender = r % 2 == 0 ? Gender::kFemale : Gender::kMale;
    rater.age_band = static_cast<AgeBand>(r % 3);
    rater.region = "synthetic";
    rater.languages = {spec.languages[r % spec.languages.size()]};
    rater.quota_total = spec.quota_per_rater;
    m.raters.push_back(std::move(rater));
  }
  return world;
}

double WinProbability(const WorldSpec& spec, int a, int b) {
  return 1.0 / (1.0 + std::pow(10.0, (Rating(spec, b) - Rating(spec, a)) / 400.0));
}

Judgement DrawJudgement(const WorldSpec& spec, int a, int b, Rng& rng) {
  Judgement judgement;
  int sign = 0;
  if (spec.tie_rate > 0.0 && UniformUnit(rng) < spec.tie_rate) {
    judgement.overall =
        UniformUnit(rng) < 0.5 ? Choice::kBothGood : Choice::kBothBad;
  } else {
    double epsilon = 0.0;
    if (spec.rater_noise > 0.0) {
      epsilon = std::normal_distribution<double>(0.0, spec.rater_noise)(rng);
    }
    const double p =
        1.0 /
        (1.0 + std::pow(10.0, (Rating(spec, b) - Rating(spec, a) + epsilon) / 400.0));
    judgement.overall = Draw(rng, p);
    sign = judgement.overall == Choice::kA ? 1 : -1;
  }
  for (int k = 0; k < kNumAxes; ++k) {
    const double gap = Quality(spec, a, k) - Quality(spec, b, k);
    Choice choice;
    if (sign == 0 && UniformUnit(rng) < spec.axis_tie_rate) {
      choice = judgement.overall;
    } else {
      choice = Draw(rng, Logistic(spec.axis_sharpness * gap +
                                  spec.axis_tilt * spec.axis_weights[k] * sign));
    }
    judgement.axes[kAllAxes[k]] = choice;
  }
  return judgement;
}

absl::StatusOr<ComparisonRecord> SimulateComparison(
    const SimulatedWorld& world, const std::string& rater_id,
    const std::string& sentence_id, const std::string& system_a,
    const std::string& system_b, std::uint64_t seed) {
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, Registry::Build(world.manifest));
  const SentenceEntry* sentence = registry.FindSentence(sentence_id);
  if (sentence == nullptr) {
    return InvalidError(errc::kUnknownReference,
                        absl::StrCat("unknown sentence ", sentence_id));
  }
  if (registry.FindRater(rater_id) == nullptr) {
    return InvalidError(errc::kUnknownReference,
                        absl::StrCat("unknown rater ", rater_id));
  }
  const SystemEntry* first = registry.FindSystem(system_a);
  const SystemEntry* second = registry.FindSystem(system_b);
  if (first == nullptr || second == nullptr) {
    return InvalidError(errc::kUnknownReference, "unknown system in pair");
  }
  if (system_a == system_b) {
    return InvalidError(errc::kSelfComparison,
                        absl::StrCat("pair compares ", system_a, " with itself"));
  }
  if (!first->supported_languages.contains(sentence->language) ||
      !second->supported_languages.contains(sentence->language)) {
    return InvalidError(errc::kUnsupportedLanguage,
                        absl::StrCat("pair does not support ",
                                     sentence->language.code()));
  }

  Rng rng(seed);
  // Indices into the registry's manifest, which mirrors world.manifest.
  const int a = static_cast<int>(first - registry.manifest().systems.data());
  const int b = static_cast<int>(second - registry.manifest().systems.data());
  const Gender gender = UniformUnit(rng) < 0.5 ? Gender::kMale : Gender::kFemale;
  const Judgement judgement = DrawJudgement(world.spec, a, b, rng);

  ComparisonRecord record;
  record.id = absl::StrFormat("sim-%016x", seed);
  record.sentence_id = sentence->id;
  record.language = sentence->language;
  record.domain = sentence->domain;
  record.subset = sentence->subset;
  record.system_a = system_a;
  record.system_b = system_b;
  const char* suffix = gender == Gender::kMale ? "_m" : "_f";
  record.voice_a = system_a + suffix;
  record.voice_b = system_b + suffix;
  record.rater_id = rater_id;
  record.overall = judgement.overall;
  record.axes = judgement.axes;
  record.t_phase1 = absl::FromUnixMillis(kStartMillis);
  record.t_phase2 = absl::FromUnixMillis(kStartMillis + 15000);
  if (record.system_a > record.system_b) record = MirrorRecord(record);
  return ValidateRecord(record, registry);
}

absl::StatusOr<SimulatedWorld> RunSimulation(const WorldSpec& spec) {
  PREFEVAL_ASSIGN_OR_RETURN(SimulatedWorld world, GenerateWorld(spec));
  PREFEVAL_ASSIGN_OR_RETURN(Registry registry, Registry::Build(world.manifest));
  std::unordered_map<std::string, int> system_index;
  for (int s = 0; s < spec.n_systems; ++s) {
    system_index[world.manifest.systems[s].id] = s;
  }

  absl::Time now = absl::FromUnixMillis(kStartMillis);
  SchedulerOptions options;
  options.seed = DeriveSeed(spec.seed, 1, 0);
  options.id_prefix = "sim-";
  const int target = spec.target_per_cell > 0 ? spec.target_per_cell : INT_MAX;
  Scheduler scheduler(
      registry, PairPlan::Balanced(registry, target), options,
      [&now] { return now; },
      [&world](const ComparisonRecord& record) {
        world.log.push_back(record);
        return absl::OkStatus();
      });

  std::vector<std::string> active;
  for (const RaterEntry& rater : world.manifest.raters) active.push_back(rater.id);
  std::uint64_t judgements = 0;
  while (!active.empty()) {
    std::vector<std::string> still_active;
    for (const std::string& rater : active) {
      auto next = scheduler.NextTask(rater);
      if (!next.ok()) {
        if (ErrorCodeOf(next.status()) == errc::kNoAdmissiblePair) continue;
        return next.status();
      }
      if (next->kind != NextTaskResult::Kind::kAssigned) continue;
      const Task& task = *next->task;
      Rng rng(DeriveSeed(spec.seed, 2, judgements++));
      const Judgement judgement =
          DrawJudgement(spec, system_index.at(task.left.system_id),
                        system_index.at(task.right.system_id), rng);
      now += absl::Seconds(20);
      PREFEVAL_RETURN_IF_ERROR(
          scheduler.SubmitOverall(task.id, judgement.overall, true).status());
      now += absl::Seconds(15);
      PREFEVAL_RETURN_IF_ERROR(
          scheduler.SubmitAxes(task.id, judgement.axes).status());
      still_active.push_back(rater);
    }
    active = std::move(still_active);
  }
  return world;
}

}  // namespace prefeval::sim
