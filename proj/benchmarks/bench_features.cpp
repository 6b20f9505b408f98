// benchmarks/bench_features.cpp

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

#include <cmath>
#include <numbers>

#include "spoofcm/audio.hpp"
#include "spoofcm/features.hpp"

namespace {

spoofcm::AudioClip one_second_tone() {
  spoofcm::AudioClip clip;
  clip.sample_rate_hz = 16000;
  clip.utt_id = "bench";
  clip.samples.resize(16000);
  for (std::size_t i = 0; i < clip.samples.size(); ++i)
    clip.samples[i] = 0.4 * std::sin(2.0 * std::numbers::pi * 523.0 * i / 16000.0);
  return clip;
}

void BM_MfccOneSecond(benchmark::State &state) {
  const spoofcm::AudioClip clip = one_second_tone();
  spoofcm::FeatureConfig cfg;
  cfg.kind = spoofcm::FeatureKind::kMfcc;
  for (auto _ : state) {
    auto fm = spoofcm::extract_features(clip, cfg);
    benchmark::DoNotOptimize(fm.values.data());
  }
}
BENCHMARK(BM_MfccOneSecond)->Unit(benchmark::kMillisecond);

void BM_LfccOneSecond(benchmark::State &state) {
  const spoofcm::AudioClip clip = one_second_tone();
  spoofcm::FeatureConfig cfg;
  cfg.kind = spoofcm::FeatureKind::kLfcc;
  for (auto _ : state) {
    auto fm = spoofcm::extract_features(clip, cfg);
    benchmark::DoNotOptimize(fm.values.data());
  }
}
BENCHMARK(BM_LfccOneSecond)->Unit(benchmark::kMillisecond);

void BM_CqccOneSecond(benchmark::State &state) {
  const spoofcm::AudioClip clip = one_second_tone();
  spoofcm::FeatureConfig cfg;
  cfg.kind = spoofcm::FeatureKind::kCqcc;
  cfg.cqt_bins_per_octave = static_cast<int>(state.range(0));
  cfg.cqt_octaves = 7;
  cfg.cqt_hop_ms = 20.0;
  for (auto _ : state) {
    auto fm = spoofcm::cqcc(clip, cfg);
    benchmark::DoNotOptimize(fm.values.data());
  }
}
BENCHMARK(BM_CqccOneSecond)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Resample48kTo16k(benchmark::State &state) {
  spoofcm::AudioClip clip = one_second_tone();
  clip.sample_rate_hz = 48000;
  for (auto _ : state) {
    auto out = spoofcm::resample(clip, 16000);
    benchmark::DoNotOptimize(out.samples.data());
  }
}
BENCHMARK(BM_Resample48kTo16k)->Unit(benchmark::kMillisecond);

}  // namespace
