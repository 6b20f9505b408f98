// benchmarks/bench_classifiers.cpp

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

#include "spoofcm/gbdt.hpp"
#include "spoofcm/gmm.hpp"
#include "spoofcm/rng.hpp"

namespace {

using namespace spoofcm;

FrameSet random_frames(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  FrameSet set;
  set.dim = dim;
  std::vector<double> row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto &v : row) v = rng.normal();
    set.append(row);
  }
  return set;
}

void BM_GmmFitK2(benchmark::State &state) {
  const FrameSet data = random_frames(static_cast<std::size_t>(state.range(0)), 60, 1);
  GmmFitOptions opts;
  opts.num_components = 2;
  opts.max_iter = 10;
  for (auto _ : state) {
    auto fit = gmm_fit_em(data, opts);
    benchmark::DoNotOptimize(fit.model.means.data());
  }
}
BENCHMARK(BM_GmmFitK2)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_GmmLogLikelihood(benchmark::State &state) {
  const FrameSet data = random_frames(500, 60, 2);
  GmmFitOptions opts;
  opts.num_components = 2;
  opts.max_iter = 5;
  const GmmModel model = gmm_fit_em(data, opts).model;
  Rng rng(3);
  std::vector<double> frame(60);
  for (auto &v : frame) v = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmm_log_likelihood(model, frame));
  }
}
BENCHMARK(BM_GmmLogLikelihood);

void BM_GbdtFit(benchmark::State &state) {
  Rng rng(4);
  std::vector<PooledVector> examples;
  std::vector<int> labels;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> x(120);
    for (auto &v : x) v = rng.normal();
    examples.push_back({std::move(x), "b" + std::to_string(i)});
    labels.push_back(rng.below(2) ? 1 : 0);
  }
  GbdtParams params;
  params.num_trees = static_cast<int>(state.range(0));
  params.preset = state.range(1) ? GbdtPreset::kSymmetric : GbdtPreset::kDepthwise;
  for (auto _ : state) {
    auto fit = gbdt_fit(examples, labels, params);
    benchmark::DoNotOptimize(fit.model.trees.data());
  }
}
BENCHMARK(BM_GbdtFit)->Args({20, 0})->Args({20, 1})->Unit(benchmark::kMillisecond);

void BM_GbdtScore(benchmark::State &state) {
  Rng rng(5);
  std::vector<PooledVector> examples;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(120);
    for (auto &v : x) v = rng.normal();
    examples.push_back({std::move(x), "b" + std::to_string(i)});
    labels.push_back(rng.below(2) ? 1 : 0);
  }
  const GbdtModel model = gbdt_fit(examples, labels, GbdtParams{}).model;
  PooledVector probe;
  probe.values.resize(120);
  for (auto &v : probe.values) v = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(gbdt_score(model, probe));
  }
}
BENCHMARK(BM_GbdtScore);

}  // namespace
