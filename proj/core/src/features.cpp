// core/src/features.cpp

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

#include "spoofcm/features.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "spoofcm/dsp.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/io_util.hpp"
#include "spoofcm/rng.hpp"

namespace spoofcm {

const char *to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kMfcc: return "mfcc";
    case FeatureKind::kLfcc: return "lfcc";
    case FeatureKind::kCqcc: return "cqcc";
  }
  return "?";
}

FeatureKind feature_kind_from_string(const std::string &s) {
  if (s == "mfcc") return FeatureKind::kMfcc;
  if (s == "lfcc") return FeatureKind::kLfcc;
  if (s == "cqcc") return FeatureKind::kCqcc;
  throw InvalidConfig("unknown feature kind '" + s + "'");
}

const char *to_string(Dynamics d) {
  switch (d) {
    case Dynamics::kStatic: return "static";
    case Dynamics::kStaticDelta: return "static+d";
    case Dynamics::kStaticDeltaDelta: return "static+d+dd";
  }
  return "?";
}

Dynamics dynamics_from_string(const std::string &s) {
  if (s == "static") return Dynamics::kStatic;
  if (s == "static+d") return Dynamics::kStaticDelta;
  if (s == "static+d+dd") return Dynamics::kStaticDeltaDelta;
  throw InvalidConfig("unknown dynamics '" + s + "'");
}

void FeatureConfig::validate() const {
  if (num_ceps < 1) throw InvalidConfig("num_ceps must be >= 1");
  if (log_floor <= 0) throw InvalidConfig("log_floor must be > 0");
  if (num_filters < 1) throw InvalidConfig("num_filters must be >= 1");
  const int needed = num_ceps + (include_c0 ? 0 : 1);
  if (kind != FeatureKind::kCqcc && needed > num_filters)
    throw InvalidConfig("num_ceps exceeds filterbank band count");
  if (kind == FeatureKind::kCqcc) {
    if (cqt_bins_per_octave < 1 || cqt_octaves < 1 || resample_period < 1)
      throw InvalidConfig("bad constant-Q geometry");
    if (needed > resample_period * cqt_octaves)
      throw InvalidConfig("num_ceps exceeds resampled band count");
    if (cqt_hop_ms <= 0) throw InvalidConfig("cqt_hop_ms must be > 0");
  }
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0)
    throw InvalidConfig("fft_size must be a power of two");
  if (hop_ms <= 0 || hop_ms > frame_ms)
    throw InvalidConfig("need 0 < hop_ms <= frame_ms");
  if (preemph < 0 || preemph >= 1) throw InvalidConfig("need 0 <= preemph < 1");
  if (fmax_hz != 0.0 && fmin_hz >= fmax_hz)
    throw InvalidConfig("need fmin < fmax");
}

std::uint64_t feature_config_hash(const FeatureConfig &cfg) {
  std::ostringstream os;
  os << to_string(cfg.kind) << '|' << cfg.num_ceps << '|' << cfg.include_c0
     << '|' << to_string(cfg.dynamics) << '|' << cfg.num_filters << '|'
     << cfg.cqt_bins_per_octave << '|' << cfg.cqt_octaves << '|'
     << cfg.resample_period << '|' << format_double(cfg.log_floor) << '|'
     << format_double(cfg.frame_ms) << '|' << format_double(cfg.hop_ms) << '|'
     << static_cast<int>(cfg.window) << '|' << format_double(cfg.preemph)
     << '|' << cfg.fft_size << '|' << format_double(cfg.fmin_hz) << '|'
     << format_double(cfg.fmax_hz) << '|' << format_double(cfg.cqt_hop_ms);
  return fnv1a64(os.str());
}

double mel_scale(double freq_hz) {
  return 2595.0 * std::log10(1.0 + freq_hz / 700.0);
}

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Filterbank build_filterbank(FilterScale scale, int num_filters, int fft_size,
                            int sample_rate_hz, double fmin_hz,
                            double fmax_hz) {
  if (fmin_hz < 0 || fmin_hz >= fmax_hz || fmax_hz > sample_rate_hz / 2.0)
    throw InvalidConfig("need 0 <= fmin < fmax <= Nyquist");
  const std::size_t num_bins = static_cast<std::size_t>(fft_size) / 2 + 1;
  const double bin_width = static_cast<double>(sample_rate_hz) / fft_size;

  // num_filters + 2 grid points from fmin to fmax, equally spaced on the
  // chosen scale; the interior points are the filter centers.
  std::vector<double> grid_hz(num_filters + 2);
  if (scale == FilterScale::kMel) {
    const double lo = mel_scale(fmin_hz), hi = mel_scale(fmax_hz);
    for (int i = 0; i < num_filters + 2; ++i)
      grid_hz[i] = mel_to_hz(lo + (hi - lo) * i / (num_filters + 1));
  } else {
    for (int i = 0; i < num_filters + 2; ++i)
      grid_hz[i] = fmin_hz + (fmax_hz - fmin_hz) * i / (num_filters + 1);
  }

  for (int i = 0; i + 1 < num_filters + 2; ++i) {
    const long b0 = std::lround(grid_hz[i] / bin_width);
    const long b1 = std::lround(grid_hz[i + 1] / bin_width);
    if (b0 == b1)
      throw DegenerateBand("band edges " + std::to_string(i) + " and " +
                           std::to_string(i + 1) + " collapse onto FFT bin " +
                           std::to_string(b0));
  }

  Filterbank fb;
  fb.num_filters = static_cast<std::size_t>(num_filters);
  fb.num_bins = num_bins;
  fb.centers_hz.assign(grid_hz.begin() + 1, grid_hz.end() - 1);
  fb.weights.assign(fb.num_filters * num_bins, 0.0);
  for (int m = 0; m < num_filters; ++m) {
    const double left = grid_hz[m], center = grid_hz[m + 1],
                 right = grid_hz[m + 2];
    double *row = fb.weights.data() + static_cast<std::size_t>(m) * num_bins;
    for (std::size_t k = 0; k < num_bins; ++k) {
      const double f = k * bin_width;
      if (f > left && f < center)
        row[k] = (f - left) / (center - left);
      else if (f >= center && f < right)
        row[k] = (right - f) / (right - center);
    }
  }
  return fb;
}

FeatureMatrix filterbank_cepstra(const FrameMatrix &frames,
                                 const Filterbank &fb,
                                 const FeatureConfig &cfg) {
  const std::size_t fft_size = static_cast<std::size_t>(cfg.fft_size);
  if (frames.frame_len > fft_size)
    throw InvalidConfig("frame longer than fft_size");
  const int first_cep = cfg.include_c0 ? 0 : 1;
  const std::size_t num_rows = static_cast<std::size_t>(cfg.num_ceps) + first_cep;
  const std::vector<double> basis = dct2_basis(num_rows, fb.num_filters);

  FeatureMatrix out;
  out.num_frames = frames.num_frames;
  out.dim = static_cast<std::size_t>(cfg.num_ceps);
  out.config = cfg;
  out.values.resize(out.num_frames * out.dim);

  std::vector<double> log_energies(fb.num_filters);
  for (std::size_t t = 0; t < frames.num_frames; ++t) {
    const std::vector<double> power = power_spectrum(
        std::span<const double>(frames.frame(t), frames.frame_len), fft_size);
    for (std::size_t m = 0; m < fb.num_filters; ++m) {
      const double *row = fb.row(m);
      double e = 0.0;
      for (std::size_t k = 0; k < fb.num_bins; ++k) e += row[k] * power[k];
      log_energies[m] = std::log(std::max(e, cfg.log_floor));
    }
    double *dst = out.values.data() + t * out.dim;
    for (int c = 0; c < cfg.num_ceps; ++c) {
      const double *brow =
          basis.data() + static_cast<std::size_t>(c + first_cep) * fb.num_filters;
      double acc = 0.0;
      for (std::size_t m = 0; m < fb.num_filters; ++m)
        acc += brow[m] * log_energies[m];
      dst[c] = acc;
    }
  }
  return stack_dynamics(out, cfg.dynamics);
}

namespace {

Filterbank config_filterbank(FilterScale scale, const FeatureConfig &cfg,
                             int sample_rate_hz) {
  const double fmax = cfg.fmax_hz > 0 ? cfg.fmax_hz : sample_rate_hz / 2.0;
  return build_filterbank(scale, cfg.num_filters, cfg.fft_size, sample_rate_hz,
                          cfg.fmin_hz, fmax);
}

}  // namespace

FeatureMatrix mfcc(const FrameMatrix &frames, const FeatureConfig &cfg,
                   int sample_rate_hz) {
  cfg.validate();
  return filterbank_cepstra(frames,
                            config_filterbank(FilterScale::kMel, cfg, sample_rate_hz),
                            cfg);
}

FeatureMatrix lfcc(const FrameMatrix &frames, const FeatureConfig &cfg,
                   int sample_rate_hz) {
  cfg.validate();
  return filterbank_cepstra(
      frames, config_filterbank(FilterScale::kLinear, cfg, sample_rate_hz), cfg);
}

FeatureMatrix stack_dynamics(const FeatureMatrix &static_features,
                             Dynamics dynamics) {
  const std::size_t T = static_features.num_frames;
  const std::size_t D = static_features.dim;
  const int mult = dynamics_multiplier(dynamics);
  FeatureMatrix out;
  out.num_frames = T;
  out.dim = D * static_cast<std::size_t>(mult);
  out.config = static_features.config;
  out.config.dynamics = dynamics;
  out.utt_id = static_features.utt_id;
  out.values.resize(T * out.dim);

  // Regression slope over +/-2 frames, denominator 2 * (1^2 + 2^2) = 10,
  // with edge frames replicated.
  auto delta_of = [&](const std::vector<double> &src, std::vector<double> &dst) {
    auto clamp_t = [&](std::ptrdiff_t t) {
      return static_cast<std::size_t>(
          std::clamp<std::ptrdiff_t>(t, 0, static_cast<std::ptrdiff_t>(T) - 1));
    };
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t d = 0; d < D; ++d) {
        double acc = 0.0;
        for (int n = 1; n <= 2; ++n) {
          const double ahead = src[clamp_t(static_cast<std::ptrdiff_t>(t) + n) * D + d];
          const double behind = src[clamp_t(static_cast<std::ptrdiff_t>(t) - n) * D + d];
          acc += n * (ahead - behind);
        }
        dst[t * D + d] = acc / 10.0;
      }
    }
  };

  std::vector<double> delta(T * D), delta2(T * D);
  if (mult >= 2) delta_of(static_features.values, delta);
  if (mult >= 3) delta_of(delta, delta2);

  for (std::size_t t = 0; t < T; ++t) {
    double *dst = out.values.data() + t * out.dim;
    const double *s = static_features.values.data() + t * D;
    std::copy(s, s + D, dst);
    if (mult >= 2) std::copy(delta.begin() + t * D, delta.begin() + (t + 1) * D, dst + D);
    if (mult >= 3)
      std::copy(delta2.begin() + t * D, delta2.begin() + (t + 1) * D, dst + 2 * D);
  }
  return out;
}

FeatureMatrix extract_features(const AudioClip &clip_in,
                               const FeatureConfig &cfg) {
  cfg.validate();
  if (clip_in.samples.empty()) throw EmptyAudio("clip " + clip_in.utt_id);
  const AudioClip clip =
      clip_in.sample_rate_hz == 16000 ? clip_in : resample(clip_in, 16000);

  FeatureMatrix fm;
  if (cfg.kind == FeatureKind::kCqcc) {
    fm = cqcc(clip, cfg);
  } else {
    const FrameMatrix frames = frame_and_window(clip, cfg.frame_ms, cfg.hop_ms,
                                                cfg.window, cfg.preemph);
    fm = cfg.kind == FeatureKind::kMfcc ? mfcc(frames, cfg, clip.sample_rate_hz)
                                        : lfcc(frames, cfg, clip.sample_rate_hz);
  }
  fm.utt_id = clip.utt_id;
  for (double v : fm.values)
    if (!std::isfinite(v))
      throw InvalidConfig("non-finite feature value in " + clip.utt_id);
  return fm;
}

namespace {
constexpr char kFeatMagic[4] = {'F', 'E', 'A', 'T'};
constexpr std::uint16_t kFeatVersion = 1;
}  // namespace

void write_feature_record(const std::string &path, const FeatureMatrix &fm) {
  std::string out;
  out.append(kFeatMagic, 4);
  put_u16(out, kFeatVersion);
  put_u32(out, static_cast<std::uint32_t>(fm.dim));
  put_u32(out, static_cast<std::uint32_t>(fm.num_frames));
  put_u64(out, feature_config_hash(fm.config));
  out.reserve(out.size() + fm.values.size() * 4);
  for (double v : fm.values) put_f32(out, static_cast<float>(v));
  write_file(path, out);
}

FeatureMatrix read_feature_record(const std::string &path,
                                  std::uint64_t expected_hash) {
  const std::string bytes = read_file(path);
  try {
    ByteReader r(bytes);
    if (std::string(r.take(4), 4) != std::string(kFeatMagic, 4))
      throw CorruptModel("bad feature magic: " + path);
    if (r.u16() != kFeatVersion) throw VersionMismatch("feature record " + path);
    FeatureMatrix fm;
    fm.dim = r.u32();
    fm.num_frames = r.u32();
    const std::uint64_t stored = r.u64();
    if (expected_hash != 0 && stored != expected_hash)
      throw HashMismatch("feature record " + path);
    const std::size_t count = fm.dim * fm.num_frames;
    fm.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) fm.values[i] = r.f32();
    fm.utt_id = std::filesystem::path(path).stem().string();
    return fm;
  } catch (const std::out_of_range &) {
    throw CorruptModel("truncated feature record: " + path);
  }
}

std::uint64_t peek_feature_record_hash(const std::string &path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const IoError &) {
    return 0;
  }
  if (bytes.size() < 22 || bytes.compare(0, 4, "FEAT") != 0) return 0;
  ByteReader r(bytes);
  r.take(4);
  if (r.u16() != kFeatVersion) return 0;
  r.u32();
  r.u32();
  return r.u64();
}

void write_feature_csv(const std::string &path, const FeatureMatrix &fm) {
  std::string out;
  for (std::size_t t = 0; t < fm.num_frames; ++t) {
    for (std::size_t d = 0; d < fm.dim; ++d) {
      if (d) out += ',';
      out += format_double(fm.at(t, d));
    }
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace spoofcm
