// tests/synth_test.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "spoofcm/dsp.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/io_util.hpp"
#include "spoofcm/synth.hpp"
#include "test_util.hpp"

using namespace spoofcm;
using test::TempDir;

namespace {

PseudoSpeaker test_speaker() {
  PseudoSpeaker sp;
  sp.speaker_id = "t-s00";
  sp.sex = Sex::kMale;
  // formants on harmonics of f0 so the strongest line is the formant itself
  sp.f0_hz = 80.0;
  sp.formants = {{480.0, 80.0}, {1520.0, 100.0}, {2480.0, 140.0}};
  return sp;
}

double rel_l2(const std::vector<double> &a, const std::vector<double> &b) {
  const std::size_t n = std::min(a.size(), b.size());
  double num = 0, den = 1e-12;
  for (std::size_t i = 0; i < n; ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += a[i] * a[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("one second at 16 kHz is 16000 samples") {
  const AudioClip clip = synth_bonafide(test_speaker(), 1.0, 7);
  CHECK(clip.samples.size() == 16000);
  CHECK(clip.sample_rate_hz == 16000);
  for (double v : clip.samples) {
    CHECK(std::abs(v) <= 1.0);
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("same speaker and seed give bitwise-identical clips") {
  const AudioClip a = synth_bonafide(test_speaker(), 1.2, 99);
  const AudioClip b = synth_bonafide(test_speaker(), 1.2, 99);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK(a.samples[i] == b.samples[i]);
  const AudioClip c = synth_bonafide(test_speaker(), 1.2, 100);
  CHECK(rel_l2(a.samples, c.samples) > 0.01);
}

TEST_CASE("spectral peaks sit within 50 Hz of the formants") {
  const PseudoSpeaker sp = test_speaker();
  const AudioClip clip = synth_bonafide(sp, 2.0, 3);
  const std::size_t n = 16384;
  std::vector<double> seg(clip.samples.begin(), clip.samples.begin() + n);
  const double bin_w = 16000.0 / n;
  for (const auto &fm : sp.formants) {
    // local argmax within +-150 Hz of the formant
    const std::size_t lo = static_cast<std::size_t>((fm.freq_hz - 150.0) / bin_w);
    const std::size_t hi = static_cast<std::size_t>((fm.freq_hz + 150.0) / bin_w);
    double best = -1.0;
    std::size_t best_k = lo;
    for (std::size_t k = lo; k <= hi; ++k) {
      const double m = test::naive_dft_mag(seg, k, n);
      if (m > best) {
        best = m;
        best_k = k;
      }
    }
    CHECK(std::abs(best_k * bin_w - fm.freq_hz) <= 50.0);
  }
}

TEST_CASE("recipe parsing accepts the grammar and rejects junk") {
  CHECK(parse_recipe("lpc_resynth", "A01").kind == SpoofKind::kLpcResynth);
  CHECK(parse_recipe("f0_shift:-2.5", "A03").param == doctest::Approx(-2.5));
  CHECK(parse_recipe("speed_shift:1.25", "A05").param == doctest::Approx(1.25));
  CHECK_THROWS_AS(parse_recipe("world_vocoder", "A01"), InvalidConfig);
  CHECK_THROWS_AS(parse_recipe("speed_shift:2.0", "A01"), InvalidConfig);
  CHECK_THROWS_AS(parse_recipe("f0_shift:oops", "A01"), InvalidConfig);
  CHECK(default_recipes().size() == 6);
}

TEST_CASE("speed factor 1.0 leaves duration unchanged") {
  const AudioClip clip = synth_bonafide(test_speaker(), 1.0, 5);
  const SpoofRecipe recipe{SpoofKind::kSpeedShift, 1.0, "A00"};
  const AudioClip out = apply_spoof(clip, recipe, 5);
  CHECK(out.samples.size() == clip.samples.size());
}

TEST_CASE("speed factor 1.25 shrinks duration to 0.8x") {
  const AudioClip clip = synth_bonafide(test_speaker(), 2.0, 5);
  const SpoofRecipe recipe{SpoofKind::kSpeedShift, 1.25, "A05"};
  const AudioClip out = apply_spoof(clip, recipe, 5);
  const double expect = 0.8 * static_cast<double>(clip.samples.size());
  // within 2 frames (25 ms = 400 samples each)
  CHECK(std::abs(static_cast<double>(out.samples.size()) - expect) <= 800.0);
  CHECK(out.sample_rate_hz == 16000);
}

TEST_CASE("f0 shift keeps duration and moves the pitch") {
  const AudioClip clip = synth_bonafide(test_speaker(), 1.5, 6);
  const SpoofRecipe recipe{SpoofKind::kF0Shift, 2.0, "A02"};
  const AudioClip out = apply_spoof(clip, recipe, 6);
  CHECK(std::abs(static_cast<double>(out.samples.size()) -
                 static_cast<double>(clip.samples.size())) <= 800.0);

  std::vector<double> in_frame(clip.samples.begin() + 4000,
                               clip.samples.begin() + 4000 + 1600);
  std::vector<double> out_frame(out.samples.begin() + 4000,
                                out.samples.begin() + 4000 + 1600);
  const double f0_in = estimate_f0(in_frame, 16000);
  const double f0_out = estimate_f0(out_frame, 16000);
  REQUIRE(f0_in > 0);
  REQUIRE(f0_out > 0);
  CHECK(f0_out / f0_in == doctest::Approx(std::pow(2.0, 2.0 / 12.0)).epsilon(0.06));
}

TEST_CASE("lpc resynthesis changes the waveform but keeps the envelope") {
  const AudioClip clip = synth_bonafide(test_speaker(), 1.5, 8);
  const SpoofRecipe recipe{SpoofKind::kLpcResynth, 1.0, "A01"};
  const AudioClip out = apply_spoof(clip, recipe, 8);
  REQUIRE(out.samples.size() == clip.samples.size());
  CHECK(rel_l2(out.samples, clip.samples) > 0.1);

  // averaged order-16 log envelopes correlate above 0.8
  const std::size_t frame_len = 400, hop = 200, env_n = 64;
  std::vector<double> env_in(env_n, 0.0), env_out(env_n, 0.0);
  std::size_t frames = 0;
  for (std::size_t pos = 2000; pos + frame_len < clip.samples.size() - 2000;
       pos += hop) {
    const LpcResult lin = lpc_analyze(
        std::span<const double>(clip.samples.data() + pos, frame_len), 16);
    const LpcResult lout = lpc_analyze(
        std::span<const double>(out.samples.data() + pos, frame_len), 16);
    const std::vector<double> ein = lpc_log_envelope(lin, env_n);
    const std::vector<double> eout = lpc_log_envelope(lout, env_n);
    for (std::size_t i = 0; i < env_n; ++i) {
      env_in[i] += ein[i];
      env_out[i] += eout[i];
    }
    ++frames;
  }
  REQUIRE(frames > 0);
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < env_n; ++i) {
    ma += env_in[i] / env_n;
    mb += env_out[i] / env_n;
  }
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < env_n; ++i) {
    cov += (env_in[i] - ma) * (env_out[i] - mb);
    va += (env_in[i] - ma) * (env_in[i] - ma);
    vb += (env_out[i] - mb) * (env_out[i] - mb);
  }
  CHECK(cov / std::sqrt(va * vb) > 0.8);
}

TEST_CASE("lpc resynthesis of silence reports UnvoicedInput") {
  AudioClip silence;
  silence.sample_rate_hz = 16000;
  silence.samples.assign(8000, 0.0);
  silence.utt_id = "sil";
  const SpoofRecipe recipe{SpoofKind::kLpcResynth, 1.0, "A01"};
  CHECK_THROWS_AS(apply_spoof(silence, recipe, 1), UnvoicedInput);
}

TEST_CASE("a small corpus counts out and validates") {
  TempDir dir("corpus_small");
  CorpusConfig cfg;
  cfg.speakers_per_domain = 5;
  cfg.utts_per_speaker = 2;
  cfg.seed = 7;
  const Manifest m = build_corpus(cfg, dir.path());
  // 2 domains x 5 speakers x 2 utts x (1 bonafide + 6 spoofs)
  CHECK(m.size() == 2 * 5 * 2 * 7);
  std::size_t bona = 0, spoof = 0;
  for (const auto &e : m) (e.label == Label::kBonafide ? bona : spoof)++;
  CHECK(bona == 20);
  CHECK(spoof == 120);
  CHECK_NOTHROW(validate_protocol(m));
  // every referenced wav exists
  for (const auto &e : m)
    CHECK(std::filesystem::exists(std::filesystem::path(dir.path()) / e.path));
  // loaded manifest equals the returned one
  const Manifest loaded = load_manifest(dir.file("manifest.tsv"));
  REQUIRE(loaded.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(loaded[i].utt_id == m[i].utt_id);
    CHECK(loaded[i].split == m[i].split);
  }
}

TEST_CASE("corpus generation is byte-deterministic") {
  TempDir a("corpus_det_a"), b("corpus_det_b");
  CorpusConfig cfg;
  cfg.speakers_per_domain = 3;
  cfg.utts_per_speaker = 2;
  cfg.seed = 11;
  build_corpus(cfg, a.path());
  build_corpus(cfg, b.path());
  CHECK(read_file(a.file("manifest.tsv")) == read_file(b.file("manifest.tsv")));
  const Manifest m = load_manifest(a.file("manifest.tsv"));
  for (const auto &e : m) {
    const std::string pa = (std::filesystem::path(a.path()) / e.path).string();
    const std::string pb = (std::filesystem::path(b.path()) / e.path).string();
    CHECK(read_file(pa) == read_file(pb));
  }
}

}  // TEST_SUITE
