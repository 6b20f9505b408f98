// benchmarks/bench_metrics.cpp

// Copyright 2026  spoofcm authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "spoofcm/metrics.hpp"
#include "spoofcm/rng.hpp"

namespace {

using namespace spoofcm;

ScoreSet random_scores(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ScoreSet s;
  for (std::size_t i = 0; i < n; ++i)
    s.entries.push_back({"u" + std::to_string(i),
                         rng.normal() + (i % 7 ? 0.0 : 0.8),
                         i % 7 ? Label::kSpoof : Label::kBonafide});
  return s;
}

void BM_DetCurve(benchmark::State &state) {
  const ScoreSet s = random_scores(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto curve = det_curve(s);
    benchmark::DoNotOptimize(curve.points.data());
  }
}
BENCHMARK(BM_DetCurve)->Range(256, 1 << 14);

void BM_Evaluate(benchmark::State &state) {
  const ScoreSet s = random_scores(static_cast<std::size_t>(state.range(0)), 2);
  const CostParams costs;
  for (auto _ : state) {
    auto r = evaluate(s, costs);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Evaluate)->Range(256, 1 << 14);

}  // namespace

BENCHMARK_MAIN();
