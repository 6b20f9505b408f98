// core/src/synth.cpp

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

#include "spoofcm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

#include "spoofcm/dsp.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/rng.hpp"

namespace spoofcm {

namespace {

constexpr int kRate = 16000;
constexpr double kNoiseFloorDb = -30.0;
constexpr std::size_t kLpcOrder = 16;

// two-pole resonator, applied in place
void apply_resonator(std::vector<double> &x, double freq_hz, double bw_hz,
                     int fs) {
  const double r = std::exp(-std::numbers::pi * bw_hz / fs);
  const double theta = 2.0 * std::numbers::pi * freq_hz / fs;
  const double a1 = 2.0 * r * std::cos(theta);
  const double a2 = -r * r;
  const double gain = (1.0 - r) * std::sqrt(1.0 - 2.0 * r * std::cos(2.0 * theta) +
                                            r * r);
  double y1 = 0.0, y2 = 0.0;
  for (double &v : x) {
    const double y = gain * v + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

double rms(const std::vector<double> &x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / std::max<std::size_t>(1, x.size()));
}

}  // namespace

AudioClip synth_bonafide(const PseudoSpeaker &speaker, double duration_s,
                         std::uint64_t seed) {
  if (duration_s < 0.5 || duration_s > 20.0)
    throw InvalidConfig("duration must be in [0.5, 20] s");
  if (speaker.f0_hz < 80.0 || speaker.f0_hz > 300.0)
    throw InvalidConfig("f0 must be in [80, 300] Hz");
  if (speaker.formants.size() < 3 || speaker.formants.size() > 5)
    throw InvalidConfig("need 3..5 formants");

  Rng rng = Rng::stream(seed, "bonafide:" + speaker.speaker_id);
  const std::size_t n = static_cast<std::size_t>(std::lround(duration_s * kRate));

  // glottal-ish excitation: jittered impulse train convolved with a short
  // decaying pulse for a natural spectral tilt
  std::vector<double> x(n, 0.0);
  const double base_period = kRate / speaker.f0_hz;
  double t = 0.0;
  while (t < static_cast<double>(n)) {
    const std::size_t idx = static_cast<std::size_t>(t);
    if (idx < n) x[idx] += 1.0;
    t += base_period * (1.0 + 0.02 * rng.uniform(-1.0, 1.0));
  }
  std::vector<double> shaped(n, 0.0);
  constexpr int kPulseLen = 12;
  double pulse[kPulseLen];
  for (int i = 0; i < kPulseLen; ++i)
    pulse[i] = (i + 1) * std::exp(-(i + 1) / 3.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < kPulseLen && i + j < n; ++j)
      shaped[i + j] += x[i] * pulse[j];
  }

  for (const PseudoSpeaker::Formant &fm : speaker.formants) {
    const double f = fm.freq_hz + speaker.domain_shift_hz;
    if (f <= 0 || f >= kRate / 2.0 * 0.98)
      throw InvalidConfig("formant beyond Nyquist after domain shift");
    if (fm.bandwidth_hz <= 0) throw InvalidConfig("bandwidth must be > 0");
    apply_resonator(shaped, f, fm.bandwidth_hz, kRate);
  }

  const double voiced_rms = std::max(rms(shaped), 1e-9);
  const double noise_amp = voiced_rms * std::pow(10.0, kNoiseFloorDb / 20.0);
  for (double &v : shaped) v += noise_amp * rng.normal();

  double peak = 1e-9;
  for (double v : shaped) peak = std::max(peak, std::abs(v));
  const double scale = 0.5 / peak;
  for (double &v : shaped) v *= scale;

  AudioClip clip;
  clip.sample_rate_hz = kRate;
  clip.samples = std::move(shaped);
  clip.utt_id = speaker.speaker_id;
  return clip;
}

SpoofRecipe parse_recipe(const std::string &text,
                         const std::string &attack_id) {
  SpoofRecipe r;
  r.attack_id = attack_id;
  std::string kind = text;
  std::string param;
  if (const std::size_t colon = text.find(':'); colon != std::string::npos) {
    kind = text.substr(0, colon);
    param = text.substr(colon + 1);
  }
  auto parse_param = [&](double fallback) {
    if (param.empty()) return fallback;
    try {
      return std::stod(param);
    } catch (const std::exception &) {
      throw InvalidConfig("bad recipe parameter '" + param + "' in '" + text + "'");
    }
  };
  if (kind == "lpc_resynth") {
    r.kind = SpoofKind::kLpcResynth;
    r.param = parse_param(1.0);
    if (r.param < 0.5 || r.param > 2.0)
      throw InvalidConfig("lpc_resynth pitch scale out of [0.5, 2]");
  } else if (kind == "f0_shift") {
    r.kind = SpoofKind::kF0Shift;
    r.param = parse_param(2.0);
    if (r.param < -4.0 || r.param > 4.0)
      throw InvalidConfig("f0_shift semitones out of [-4, 4]");
  } else if (kind == "speed_shift") {
    r.kind = SpoofKind::kSpeedShift;
    r.param = parse_param(1.1);
    if (r.param < 0.8 || r.param > 1.25)
      throw InvalidConfig("speed_shift factor out of [0.8, 1.25]");
  } else {
    throw InvalidConfig("unknown spoof recipe '" + kind + "'");
  }
  return r;
}

std::vector<SpoofRecipe> default_recipes() {
  return {
      parse_recipe("lpc_resynth", "A01"),
      parse_recipe("f0_shift:1.5", "A02"),
      parse_recipe("f0_shift:-2", "A03"),
      parse_recipe("speed_shift:0.92", "A04"),
      parse_recipe("speed_shift:1.1", "A05"),
      parse_recipe("lpc_resynth:0.96", "A06"),
  };
}

namespace {

AudioClip lpc_resynth(const AudioClip &clip, double pitch_scale,
                      std::uint64_t seed) {
  const int fs = clip.sample_rate_hz;
  const std::size_t frame_len = static_cast<std::size_t>(fs * 25 / 1000);
  const std::size_t hop = frame_len / 2;  // 50% overlap-add
  const std::size_t n = clip.samples.size();
  if (n < frame_len) throw ClipTooShort("clip shorter than one LPC frame");

  Rng rng = Rng::stream(seed, "lpc:" + clip.utt_id);
  const std::vector<double> window = make_window(WindowKind::kHann, frame_len);

  std::vector<double> out(n, 0.0);
  std::vector<double> overlap_norm(n, 1e-12);
  std::vector<double> frame(frame_len), excitation(frame_len), synth(frame_len);

  double pulse_phase = 0.0;  // carried across frames for pulse continuity
  std::size_t voiced_frames = 0;
  const std::size_t num_frames = (n - frame_len) / hop + 1;
  for (std::size_t f = 0; f < num_frames; ++f) {
    const double *src = clip.samples.data() + f * hop;
    for (std::size_t i = 0; i < frame_len; ++i) frame[i] = src[i] * window[i];

    const LpcResult lpc = lpc_analyze(frame, kLpcOrder);
    const double f0 = estimate_f0(frame, fs);

    std::fill(excitation.begin(), excitation.end(), 0.0);
    if (f0 > 0) {
      ++voiced_frames;
      const double period = fs / (f0 * pitch_scale);
      const double amp = std::sqrt(std::max(lpc.gain_sq, 1e-20) * period);
      while (pulse_phase < static_cast<double>(frame_len)) {
        const std::size_t idx = static_cast<std::size_t>(pulse_phase);
        if (idx < frame_len) excitation[idx] += amp;
        // slight pulse-timing jitter keeps the resynthesis from being a
        // sterile giveaway
        pulse_phase += period * (1.0 + 0.01 * rng.uniform(-1.0, 1.0));
      }
      pulse_phase -= static_cast<double>(hop);
      if (pulse_phase < 0) pulse_phase = 0;
      const double noise_amp = 0.08 * std::sqrt(std::max(lpc.gain_sq, 0.0));
      for (double &e : excitation) e += noise_amp * rng.normal();
    } else {
      // unvoiced: noise excitation carrying the residual energy
      const double amp = std::sqrt(std::max(lpc.gain_sq, 0.0));
      for (double &e : excitation) e = amp * rng.normal();
      pulse_phase = 0.0;
    }

    // drive the all-pole synthesis filter
    for (std::size_t i = 0; i < frame_len; ++i) {
      double y = excitation[i];
      for (std::size_t j = 0; j < kLpcOrder && j < i; ++j)
        y += lpc.coeffs[j] * synth[i - j - 1];
      synth[i] = y;
    }

    // match frame energy to the analysis frame, then overlap-add
    const double in_energy = std::inner_product(frame.begin(), frame.end(),
                                                frame.begin(), 0.0);
    double out_energy = 1e-20;
    for (std::size_t i = 0; i < frame_len; ++i)
      out_energy += synth[i] * synth[i] * window[i] * window[i];
    const double g = std::sqrt(in_energy / out_energy);
    for (std::size_t i = 0; i < frame_len; ++i) {
      out[f * hop + i] += g * synth[i] * window[i] * window[i];
      overlap_norm[f * hop + i] += window[i] * window[i];
    }
  }
  if (voiced_frames == 0)
    throw UnvoicedInput("no voiced frames in " + clip.utt_id);

  for (std::size_t i = 0; i < n; ++i) out[i] /= overlap_norm[i];
  double peak = 1e-9;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 1.0)
    for (double &v : out) v /= peak;

  AudioClip res;
  res.sample_rate_hz = fs;
  res.samples = std::move(out);
  res.utt_id = clip.utt_id;
  return res;
}

// plain overlap-add time stretch; the granular phasiness is part of the
// spoofing artifact
AudioClip ola_stretch(const AudioClip &clip, double stretch) {
  const int fs = clip.sample_rate_hz;
  const std::size_t grain = static_cast<std::size_t>(fs * 40 / 1000);
  const std::size_t syn_hop = grain / 4;
  const double ana_hop = static_cast<double>(syn_hop) / stretch;
  const std::size_t n = clip.samples.size();
  const std::size_t n_out = static_cast<std::size_t>(std::lround(
      static_cast<double>(n) * stretch));

  const std::vector<double> window = make_window(WindowKind::kHann, grain);
  std::vector<double> out(n_out + grain, 0.0), norm(n_out + grain, 1e-9);
  for (std::size_t t = 0;; ++t) {
    const std::size_t out_pos = t * syn_hop;
    if (out_pos >= n_out) break;
    const std::size_t in_pos = static_cast<std::size_t>(t * ana_hop);
    for (std::size_t i = 0; i < grain; ++i) {
      const std::size_t src = in_pos + i;
      const double v = src < n ? clip.samples[src] : 0.0;
      out[out_pos + i] += v * window[i];
      norm[out_pos + i] += window[i];
    }
  }
  AudioClip res;
  res.sample_rate_hz = fs;
  res.utt_id = clip.utt_id;
  res.samples.resize(n_out);
  for (std::size_t i = 0; i < n_out; ++i) res.samples[i] = out[i] / norm[i];
  return res;
}

}  // namespace

AudioClip apply_spoof(const AudioClip &clip, const SpoofRecipe &recipe,
                      std::uint64_t seed) {
  switch (recipe.kind) {
    case SpoofKind::kLpcResynth:
      return lpc_resynth(clip, recipe.param, seed);
    case SpoofKind::kSpeedShift: {
      if (recipe.param == 1.0) return clip;
      const int target = static_cast<int>(std::lround(
          clip.sample_rate_hz / recipe.param));
      AudioClip shifted = resample(clip, target);
      shifted.sample_rate_hz = clip.sample_rate_hz;  // reinterpret: tempo change
      return shifted;
    }
    case SpoofKind::kF0Shift: {
      const double factor = std::pow(2.0, recipe.param / 12.0);
      if (factor == 1.0) return clip;
      const int target = static_cast<int>(std::lround(
          clip.sample_rate_hz / factor));
      AudioClip shifted = resample(clip, target);
      shifted.sample_rate_hz = clip.sample_rate_hz;  // pitch up by factor
      return ola_stretch(shifted, factor);           // restore the duration
    }
  }
  throw InvalidConfig("unknown spoof kind");
}

namespace {

PseudoSpeaker make_speaker(Domain domain, int index,
                           const CorpusConfig &config) {
  PseudoSpeaker sp;
  sp.sex = index % 2 == 0 ? Sex::kMale : Sex::kFemale;
  char id[32];
  std::snprintf(id, sizeof(id), "%s-s%02d",
                domain == Domain::kNative ? "nat" : "non", index);
  sp.speaker_id = id;

  Rng rng = Rng::stream(config.seed, "speaker:" + sp.speaker_id);
  // distinct F0 ranges per domain and sex
  if (domain == Domain::kNative)
    sp.f0_hz = sp.sex == Sex::kMale ? rng.uniform(95.0, 150.0)
                                    : rng.uniform(165.0, 215.0);
  else
    sp.f0_hz = sp.sex == Sex::kMale ? rng.uniform(120.0, 190.0)
                                    : rng.uniform(210.0, 280.0);

  const double base_m[4] = {520.0, 1480.0, 2480.0, 3450.0};
  const double base_f[4] = {600.0, 1720.0, 2850.0, 3900.0};
  const double base_bw[4] = {90.0, 110.0, 150.0, 200.0};
  const double *base = sp.sex == Sex::kMale ? base_m : base_f;
  for (int i = 0; i < 4; ++i)
    sp.formants.push_back({base[i] * rng.uniform(0.95, 1.05),
                           base_bw[i] * rng.uniform(0.9, 1.1)});
  sp.domain_shift_hz =
      domain == Domain::kNative
          ? 0.0
          : rng.uniform(config.domain_shift_lo_hz, config.domain_shift_hi_hz);
  return sp;
}

}  // namespace

Manifest build_corpus(const CorpusConfig &config, const std::string &out_dir) {
  if (config.recipes.empty()) throw InvalidConfig("need at least one recipe");
  if (config.speakers_per_domain < 3)
    throw InsufficientSpeakers("need at least 3 speakers per domain");
  namespace fs = std::filesystem;
  const fs::path wav_dir = fs::path(out_dir) / "wav";
  fs::create_directories(wav_dir);

  Manifest manifest;
  for (Domain domain : {Domain::kNative, Domain::kNonnative}) {
    for (int s = 0; s < config.speakers_per_domain; ++s) {
      const PseudoSpeaker speaker = make_speaker(domain, s, config);
      for (int u = 0; u < config.utts_per_speaker; ++u) {
        char utt[64];
        std::snprintf(utt, sizeof(utt), "%s-u%03d", speaker.speaker_id.c_str(), u);
        Rng rng = Rng::stream(config.seed, std::string("utt:") + utt);

        // per-utterance variation of the speaker's voice; wide enough that
        // the bonafide class overlaps the weaker attacks
        PseudoSpeaker variant = speaker;
        variant.f0_hz = std::clamp(speaker.f0_hz * rng.uniform(0.88, 1.12),
                                   80.0, 300.0);
        for (auto &fm : variant.formants) {
          fm.freq_hz *= rng.uniform(0.94, 1.06);
          fm.bandwidth_hz *= rng.uniform(0.8, 1.25);
        }
        const double duration =
            rng.uniform(config.min_duration_s, config.max_duration_s);
        const std::uint64_t utt_seed = rng.next_u64();

        AudioClip bona = synth_bonafide(variant, duration, utt_seed);
        bona.utt_id = utt;
        write_wav((wav_dir / (bona.utt_id + ".wav")).string(), bona);

        ManifestEntry e;
        e.utt_id = bona.utt_id;
        e.path = "wav/" + bona.utt_id + ".wav";
        e.speaker_id = speaker.speaker_id;
        e.sex = speaker.sex;
        e.domain = domain;
        e.label = Label::kBonafide;
        e.attack_id = "-";
        manifest.push_back(e);

        for (const SpoofRecipe &recipe : config.recipes) {
          AudioClip spoof = apply_spoof(bona, recipe, utt_seed);
          spoof.utt_id = bona.utt_id + "-" + recipe.attack_id;
          write_wav((wav_dir / (spoof.utt_id + ".wav")).string(), spoof);

          ManifestEntry se = e;
          se.utt_id = spoof.utt_id;
          se.path = "wav/" + spoof.utt_id + ".wav";
          se.label = Label::kSpoof;
          se.attack_id = recipe.attack_id;
          manifest.push_back(se);
        }
      }
    }
  }

  manifest = make_splits(manifest, {0.7, 0.1, 0.2}, config.seed);
  validate_protocol(manifest);  // throws if the construction went wrong
  save_manifest((fs::path(out_dir) / "manifest.tsv").string(), manifest);
  return manifest;
}

}  // namespace spoofcm
