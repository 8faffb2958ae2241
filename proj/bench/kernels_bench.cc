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

// Serial reference vs OpenMP kernel for the three replicate-parallel loops.
// Both variants produce identical results; only wall time differs.

#include <benchmark/benchmark.h>

#include "prefeval/bt/bootstrap.h"
#include "prefeval/bt/win_matrix.h"
#include "prefeval/interpret/classifier.h"
#include "prefeval/interpret/features.h"
#include "prefeval/interpret/shapley.h"
#include "prefeval/reliability/curves.h"
#include "prefeval/sim/simulator.h"

namespace prefeval {
namespace {

const sim::SimulatedWorld& World() {
  static const sim::SimulatedWorld* world = [] {
    sim::WorldSpec spec;
    spec.n_systems = 7;
    spec.true_ratings = sim::EvenlySpacedRatings(7, 60);
    spec.n_raters = 40;
    spec.quota_per_rater = 150;
    spec.n_sentences = 200;
    spec.languages = {*LanguageCode::Parse("hin"), *LanguageCode::Parse("tam")};
    spec.axis_weights = {0.4, 0.3, 0.1, 0.1, 0.05, 0.05};
    spec.seed = 1;
    return new sim::SimulatedWorld(*sim::RunSimulation(spec));
  }();
  return *world;
}

bt::BootstrapOptions BootstrapConfig(int threads) {
  bt::BootstrapOptions options;
  options.replicates = 200;
  options.seed = 7;
  options.num_threads = threads;
  return options;
}

void BM_BootstrapSerial(benchmark::State& state) {
  const bt::IndexedLog log = *bt::IndexLog(World().log, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(bt::BootstrapSerial(log, BootstrapConfig(1)));
  }
}
BENCHMARK(BM_BootstrapSerial)->Unit(benchmark::kMillisecond);

void BM_BootstrapParallel(benchmark::State& state) {
  const bt::IndexedLog log = *bt::IndexLog(World().log, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bt::BootstrapParallel(log, BootstrapConfig(static_cast<int>(state.range(0)))));
  }
}
BENCHMARK(BM_BootstrapParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

struct ShapleyFixture {
  std::vector<interpret::FeatureRow> rows;
  interpret::PreferenceModel model;
};

const ShapleyFixture& Shapley() {
  static const ShapleyFixture* fixture = [] {
    auto* f = new ShapleyFixture;
    f->rows = interpret::BuildFeatureDataset(World().log);
    // Repeat the rows so the per-row loop dominates.
    const std::size_t n = f->rows.size();
    for (int copy = 0; copy < 20; ++copy) {
      for (std::size_t i = 0; i < n; ++i) f->rows.push_back(f->rows[i]);
    }
    f->model = *interpret::TrainPreferenceClassifier(f->rows, {});
    return f;
  }();
  return *fixture;
}

void BM_ShapleySerial(benchmark::State& state) {
  const ShapleyFixture& f = Shapley();
  const interpret::ShapleyExplainer explainer(f.model.table(), std::span(f.rows));
  for (auto _ : state) {
    benchmark::DoNotOptimize(interpret::MeanAbsShapleySerial(explainer, f.rows));
  }
}
BENCHMARK(BM_ShapleySerial)->Unit(benchmark::kMillisecond);

void BM_ShapleyParallel(benchmark::State& state) {
  const ShapleyFixture& f = Shapley();
  const interpret::ShapleyExplainer explainer(f.model.table(), std::span(f.rows));
  for (auto _ : state) {
    benchmark::DoNotOptimize(interpret::MeanAbsShapleyParallel(
        explainer, f.rows, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_ShapleyParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

reliability::ReliabilityOptions CurveConfig(int threads) {
  reliability::ReliabilityOptions options;
  options.grid = {5, 10, 20, 40};
  options.trials = 5;
  options.bootstrap_replicates = 30;
  options.seed = 3;
  options.num_threads = threads;
  return options;
}

void BM_ReliabilitySerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reliability::RaterSubsampleCurveSerial(World().log, CurveConfig(1)));
  }
}
BENCHMARK(BM_ReliabilitySerial)->Unit(benchmark::kMillisecond);

void BM_ReliabilityParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(reliability::RaterSubsampleCurve(
        World().log, CurveConfig(static_cast<int>(state.range(0)))));
  }
}
BENCHMARK(BM_ReliabilityParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace prefeval

BENCHMARK_MAIN();
