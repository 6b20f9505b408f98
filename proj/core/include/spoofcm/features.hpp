// core/include/spoofcm/features.hpp

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

#ifndef SPOOFCM_FEATURES_HPP_
#define SPOOFCM_FEATURES_HPP_

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "spoofcm/audio.hpp"

namespace spoofcm {

enum class FeatureKind { kMfcc, kLfcc, kCqcc };
enum class Dynamics { kStatic, kStaticDelta, kStaticDeltaDelta };
enum class FilterScale { kMel, kLinear };

const char *to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string &s);
const char *to_string(Dynamics dynamics);
Dynamics dynamics_from_string(const std::string &s);

inline int dynamics_multiplier(Dynamics d) {
  switch (d) {
    case Dynamics::kStatic: return 1;
    case Dynamics::kStaticDelta: return 2;
    case Dynamics::kStaticDeltaDelta: return 3;
  }
  return 1;
}

/// Front-end configuration. The defaults are the toolkit's reference
/// settings: 20 cepstra plus delta and delta-delta (dim 60), 40 bands over a
/// 512-point FFT, 25 ms Hamming frames every 10 ms with 0.97 pre-emphasis,
/// and a 96-bins-per-octave 9-octave constant-Q geometry.
struct FeatureConfig {
  FeatureKind kind = FeatureKind::kMfcc;
  int num_ceps = 20;
  bool include_c0 = false;
  Dynamics dynamics = Dynamics::kStaticDeltaDelta;
  int num_filters = 40;
  int cqt_bins_per_octave = 96;
  int cqt_octaves = 9;
  int resample_period = 16;
  double log_floor = 1e-10;

  // framing / spectrum
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  WindowKind window = WindowKind::kHamming;
  double preemph = 0.97;
  int fft_size = 512;
  double fmin_hz = 0.0;
  double fmax_hz = 0.0;  // 0 = Nyquist
  double cqt_hop_ms = 10.0;

  int dim() const { return num_ceps * dynamics_multiplier(dynamics); }
  void validate() const;  // throws InvalidConfig
};

/// Stable 64-bit hash of every field above; stamped into feature cache
/// records and trained models so mismatched front-ends are caught early.
std::uint64_t feature_config_hash(const FeatureConfig &cfg);

/// Frames x coefficients, row-major.
struct FeatureMatrix {
  std::vector<double> values;
  std::size_t num_frames = 0;
  std::size_t dim = 0;
  FeatureConfig config;
  std::string utt_id;

  const double *frame(std::size_t t) const { return values.data() + t * dim; }
  double at(std::size_t t, std::size_t d) const { return values[t * dim + d]; }
};

/// HTK mel scale: 2595 * log10(1 + f / 700).
double mel_scale(double freq_hz);
/// Inverse of mel_scale.
double mel_to_hz(double mel);

/// Triangular filterbank, row-major [num_filters x (fft_size/2 + 1)].
/// Centers are equally spaced on the chosen scale between fmin and fmax;
/// each triangle rises from the previous center and falls to the next.
struct Filterbank {
  std::vector<double> weights;
  std::size_t num_filters = 0;
  std::size_t num_bins = 0;
  std::vector<double> centers_hz;

  const double *row(std::size_t f) const { return weights.data() + f * num_bins; }
};

/// Throws DegenerateBand when adjacent band edges collapse onto one FFT bin.
Filterbank build_filterbank(FilterScale scale, int num_filters, int fft_size,
                            int sample_rate_hz, double fmin_hz, double fmax_hz);

/// Shared cepstral pipeline behind mfcc/lfcc: power spectrum -> filterbank
/// energies -> log with floor -> orthonormal DCT-II -> num_ceps coefficients
/// (starting at c1 unless include_c0) -> delta stacking.
FeatureMatrix filterbank_cepstra(const FrameMatrix &frames,
                                 const Filterbank &fb,
                                 const FeatureConfig &cfg);

FeatureMatrix mfcc(const FrameMatrix &frames, const FeatureConfig &cfg,
                   int sample_rate_hz);
FeatureMatrix lfcc(const FrameMatrix &frames, const FeatureConfig &cfg,
                   int sample_rate_hz);

/// Constant-Q transform. Bin k sits at fmin * 2^(k/B) with fmin =
/// fmax / 2^octaves, analyzed over a Hann window of N_k = ceil(Q fs / f_k)
/// samples, Q = 1 / (2^(1/B) - 1). Frames are centered every hop; windows
/// reaching past the clip see zeros. Magnitudes are normalized by N_k.
/// Throws WindowExceedsSignal when N_0 exceeds the clip length.
struct CqtMatrix {
  std::vector<std::complex<double>> values;  // [num_frames x num_bins]
  std::size_t num_frames = 0;
  std::size_t num_bins = 0;
  std::vector<double> bin_freqs_hz;
  std::vector<std::size_t> window_lens;
  std::size_t hop_len = 0;
};

CqtMatrix cqt(const AudioClip &clip, int bins_per_octave, int octaves,
              double fmax_hz, double hop_ms = 10.0);

/// CQCC: log |CQT|^2, uniformly resampled from the geometric bin axis onto
/// resample_period * octaves linearly spaced frequencies, then DCT-II.
FeatureMatrix cqcc(const AudioClip &clip, const FeatureConfig &cfg);

/// Appends delta (and delta-delta) regression slopes over a +/-2 frame
/// window with edge replication; columns ordered [static | d | dd].
FeatureMatrix stack_dynamics(const FeatureMatrix &static_features,
                             Dynamics dynamics);

/// Full front end for one clip: resamples to 16 kHz when needed, then
/// dispatches on cfg.kind.
FeatureMatrix extract_features(const AudioClip &clip,
                               const FeatureConfig &cfg);

/// Feature cache records: "FEAT" magic, version u16, dim u32, frames u32,
/// config hash u64 (all little-endian), then row-major float32 values.
void write_feature_record(const std::string &path, const FeatureMatrix &fm);

/// Reads a record back (values widen to double). utt_id is taken from the
/// file stem. Throws CorruptModel on malformed records; when expected_hash
/// is nonzero and differs from the stored hash, throws HashMismatch.
FeatureMatrix read_feature_record(const std::string &path,
                                  std::uint64_t expected_hash);

/// Stored config hash of a record without loading the payload;
/// returns 0 when the file is missing or malformed.
std::uint64_t peek_feature_record_hash(const std::string &path);

/// One frame per line, coefficients separated by commas.
void write_feature_csv(const std::string &path, const FeatureMatrix &fm);

}  // namespace spoofcm

#endif  // SPOOFCM_FEATURES_HPP_
