// core/include/spoofcm/synth.hpp

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

#ifndef SPOOFCM_SYNTH_HPP_
#define SPOOFCM_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "spoofcm/audio.hpp"
#include "spoofcm/manifest.hpp"

namespace spoofcm {

/// Source-filter voice: an impulse train at f0 driven through a cascade of
/// formant resonators. domain_shift_hz is added to every formant frequency
/// and models the native vs non-native gap.
struct PseudoSpeaker {
  std::string speaker_id;
  Sex sex = Sex::kUnknown;
  double f0_hz = 120.0;  // 80..300
  struct Formant {
    double freq_hz;
    double bandwidth_hz;
  };
  std::vector<Formant> formants;  // 3..5 resonances
  double domain_shift_hz = 0.0;
};

enum class SpoofKind { kLpcResynth, kF0Shift, kSpeedShift };

/// kind-specific parameter: lpc_resynth scales the resynthesis pitch,
/// f0_shift is in semitones (-4..+4), speed_shift is the tempo factor
/// (0.8..1.25).
struct SpoofRecipe {
  SpoofKind kind = SpoofKind::kLpcResynth;
  double param = 1.0;
  std::string attack_id;
};

/// Parses "lpc_resynth[:scale]", "f0_shift:<semitones>",
/// "speed_shift:<factor>". Throws InvalidConfig on unknown kinds or
/// out-of-range parameters.
SpoofRecipe parse_recipe(const std::string &text, const std::string &attack_id);

/// The six default attacks (two LPC vocoder variants, two pitch shifts,
/// two tempo shifts), giving the 6:1 spoof:bonafide ratio.
std::vector<SpoofRecipe> default_recipes();

/// Impulse train at f0 with seeded +/-2% jitter, filtered through the
/// speaker's resonators, plus a -30 dB noise floor. Deterministic per
/// (speaker, duration, seed).
AudioClip synth_bonafide(const PseudoSpeaker &speaker, double duration_s,
                         std::uint64_t seed);

/// lpc_resynth: order-16 LPC per 25 ms frame, excitation replaced by a pulse
/// train at the estimated (scaled) F0, overlap-add resynthesis; throws
/// UnvoicedInput when no frame is voiced. f0_shift: resample-then-stretch
/// pitch shift. speed_shift: plain resampling, duration scales by 1/factor.
AudioClip apply_spoof(const AudioClip &clip, const SpoofRecipe &recipe,
                      std::uint64_t seed);

struct CorpusConfig {
  int speakers_per_domain = 12;
  int utts_per_speaker = 20;
  std::vector<SpoofRecipe> recipes = default_recipes();
  std::uint64_t seed = 42;
  double min_duration_s = 1.0;
  double max_duration_s = 1.45;
  // non-native formant offset range (Hz), drawn per speaker
  double domain_shift_lo_hz = 330.0;
  double domain_shift_hi_hz = 430.0;
};

/// Writes 16 kHz PCM16 WAVs under out_dir/wav plus out_dir/manifest.tsv with
/// speaker-disjoint 70-10-20 splits. Returns the manifest. Two runs with the
/// same config produce identical audio bytes and manifest bytes.
Manifest build_corpus(const CorpusConfig &config, const std::string &out_dir);

}  // namespace spoofcm

#endif  // SPOOFCM_SYNTH_HPP_
