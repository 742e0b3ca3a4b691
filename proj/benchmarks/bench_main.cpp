// Copyright 2026 The alignscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "alignscope/alignment.hpp"
#include "alignscope/dialogue.hpp"
#include "alignscope/providers.hpp"
#include "alignscope/stats.hpp"
#include "alignscope/synth.hpp"

namespace {

using namespace alignscope;

Dialogue planted_dialogue(std::size_t rounds) {
  SynthOptions options;
  options.n = 1;
  options.rounds = rounds;
  return build_dialogue(generate_synthetic(options).dialogues.front());
}

void BM_ScoreDialogue(benchmark::State& state) {
  const AlignmentEngine engine(make_default_providers());
  const Dialogue dialogue = planted_dialogue(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(engine.score_dialogue(dialogue));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScoreDialogue)->Arg(10)->Arg(40);

void BM_Embed(benchmark::State& state) {
  const FeatureProviders providers = make_default_providers();
  const std::string text =
      "i think the money and the bank account would help us both if you send it today";
  for (auto _ : state) benchmark::DoNotOptimize(providers.embedding->embed(text));
}
BENCHMARK(BM_Embed);

void BM_ExactWilcoxon(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<double> d(static_cast<std::size_t>(state.range(0)));
  for (double& x : d) x = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(stats::wilcoxon_signed_rank(d));
}
BENCHMARK(BM_ExactWilcoxon)->Arg(12)->Arg(25);

void BM_TrendAnalysis(benchmark::State& state) {
  SynthOptions options;
  const AlignmentEngine engine(make_default_providers());
  std::vector<Trajectory> trajectories;
  for (const RawDialogue& raw : generate_synthetic(options).dialogues) {
    trajectories.push_back(engine.score_dialogue(build_dialogue(raw)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::trend_analysis(trajectories, Score::kSem));
  }
}
BENCHMARK(BM_TrendAnalysis);

}  // namespace

BENCHMARK_MAIN();
