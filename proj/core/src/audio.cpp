// core/src/audio.cpp

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

#include "spoofcm/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "spoofcm/error.hpp"
#include "spoofcm/io_util.hpp"

namespace spoofcm {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct WavFormat {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace

AudioClip read_wav(const std::string &path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0)
    throw MalformedContainer("not a RIFF/WAVE file: " + path);

  WavFormat fmt;
  bool have_fmt = false;
  const char *data_ptr = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    std::uint32_t chunk_size;
    std::memcpy(&chunk_size, bytes.data() + pos + 4, 4);
    pos += 8;
    if (chunk_size > bytes.size() - pos)
      throw MalformedContainer("chunk '" + id + "' overruns file: " + path);
    if (id == "fmt ") {
      if (chunk_size < 16) throw MalformedContainer("fmt chunk too small");
      ByteReader r(bytes.data() + pos, chunk_size);
      fmt.format = r.u16();
      fmt.channels = r.u16();
      fmt.sample_rate = r.u32();
      r.u32();  // byte rate
      r.u16();  // block align
      fmt.bits_per_sample = r.u16();
      if (fmt.format == kFormatExtensible && chunk_size >= 40) {
        r.u16();  // cbSize
        r.u16();  // valid bits
        r.u32();  // channel mask
        fmt.format = r.u16();  // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      data_ptr = bytes.data() + pos;
      data_size = chunk_size;
    }
    pos += chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_ptr == nullptr)
    throw MalformedContainer("missing fmt/data chunk: " + path);
  if (fmt.channels < 1 || fmt.channels > 2)
    throw UnsupportedEncoding("only mono/stereo supported, got " +
                              std::to_string(fmt.channels) + " channels");
  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits_per_sample == 16;
  const bool f32 = fmt.format == kFormatFloat && fmt.bits_per_sample == 32;
  if (!pcm16 && !f32)
    throw UnsupportedEncoding("format tag " + std::to_string(fmt.format) +
                              " / " + std::to_string(fmt.bits_per_sample) +
                              " bits (want PCM16 or float32)");
  if (fmt.sample_rate == 0) throw MalformedContainer("zero sample rate");

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t stride = bytes_per_sample * fmt.channels;
  const std::size_t num_frames = data_size / stride;
  if (num_frames == 0) throw EmptyAudio("no data samples: " + path);

  AudioClip clip;
  clip.sample_rate_hz = static_cast<int>(fmt.sample_rate);
  clip.utt_id = std::filesystem::path(path).stem().string();
  clip.samples.resize(num_frames);

  ByteReader r(data_ptr, num_frames * stride);
  for (std::size_t i = 0; i < num_frames; ++i) {
    double acc = 0.0;
    for (unsigned c = 0; c < fmt.channels; ++c) {
      if (pcm16) {
        const std::int16_t s = static_cast<std::int16_t>(r.u16());
        acc += s / 32768.0;
      } else {
        acc += r.f32();
      }
    }
    clip.samples[i] = acc / fmt.channels;
  }
  return clip;
}

void write_wav(const std::string &path, const AudioClip &clip) {
  const std::uint32_t n = static_cast<std::uint32_t>(clip.samples.size());
  const std::uint32_t data_bytes = n * 2;
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits per sample
  out += "data";
  put_u32(out, data_bytes);
  for (double v : clip.samples) {
    double scaled = std::clamp(v, -1.0, 1.0) * 32768.0;
    long q = std::lround(scaled);
    q = std::clamp(q, -32768L, 32767L);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  write_file(path, out);
}

namespace {

// Kaiser window needs I0; the power series converges quickly for beta <= 20.
double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double half_sq = 0.25 * x * x;
  for (int k = 1; k < 64; ++k) {
    term *= half_sq / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

constexpr int kZeroCrossingsPerSide = 32;
constexpr double kKaiserBeta = 8.0;

// One filter table per distinct (src, dst) pair. Phase p of L holds the taps
// for output samples whose fractional input position is p/L.
struct ResampleFilter {
  int num_phases = 0;
  int taps_per_phase = 0;
  int left_extent = 0;  // input index offset of tap 0 relative to floor(t)
  std::vector<double> taps;  // [num_phases x taps_per_phase]
};

ResampleFilter build_filter(int src_hz, int dst_hz) {
  const int g = std::gcd(src_hz, dst_hz);
  ResampleFilter f;
  f.num_phases = dst_hz / g;
  // When downsampling, the anti-alias cutoff drops to dst/src of Nyquist and
  // the kernel support widens by the inverse so it keeps 32 zero crossings.
  const double cutoff = std::min(1.0, static_cast<double>(dst_hz) / src_hz);
  const double support = kZeroCrossingsPerSide / cutoff;
  f.left_extent = static_cast<int>(std::ceil(support)) - 1;
  f.taps_per_phase = 2 * f.left_extent + 2;
  f.taps.resize(static_cast<std::size_t>(f.num_phases) * f.taps_per_phase);
  const double i0_beta = bessel_i0(kKaiserBeta);
  for (int p = 0; p < f.num_phases; ++p) {
    const double frac = static_cast<double>(p) / f.num_phases;
    double *row = f.taps.data() + static_cast<std::size_t>(p) * f.taps_per_phase;
    double sum = 0.0;
    for (int j = 0; j < f.taps_per_phase; ++j) {
      const double x = (j - f.left_extent) - frac;  // input-sample offset
      double w = 0.0;
      const double u = x / support;
      if (std::abs(u) <= 1.0)
        w = bessel_i0(kKaiserBeta * std::sqrt(1.0 - u * u)) / i0_beta;
      row[j] = cutoff * sinc(cutoff * x) * w;
      sum += row[j];
    }
    for (int j = 0; j < f.taps_per_phase; ++j) row[j] /= sum;  // exact DC
  }
  return f;
}

const ResampleFilter &cached_filter(int src_hz, int dst_hz) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, ResampleFilter> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(src_hz, dst_hz);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_filter(src_hz, dst_hz)).first;
  return it->second;
}

}  // namespace

AudioClip resample(const AudioClip &clip, int target_hz) {
  if (target_hz <= 0) throw InvalidConfig("resample target must be positive");
  if (clip.sample_rate_hz == target_hz) return clip;
  if (clip.samples.empty()) throw EmptyAudio("cannot resample empty clip");

  const int src = clip.sample_rate_hz;
  const ResampleFilter &f = cached_filter(src, target_hz);
  const int g = std::gcd(src, target_hz);
  const std::int64_t step_num = src / g;   // input advance per output, num/den
  const std::int64_t den = target_hz / g;  // == f.num_phases

  const std::int64_t n_in = static_cast<std::int64_t>(clip.samples.size());
  const std::int64_t n_out = std::llround(static_cast<double>(n_in) *
                                          target_hz / src);
  AudioClip out;
  out.sample_rate_hz = target_hz;
  out.utt_id = clip.utt_id;
  out.samples.resize(static_cast<std::size_t>(n_out));

  const double *x = clip.samples.data();
  auto sample_at = [&](std::int64_t i) {
    // Edge replication: preserves DC across the clip boundaries.
    if (i < 0) return x[0];
    if (i >= n_in) return x[n_in - 1];
    return x[i];
  };

  for (std::int64_t n = 0; n < n_out; ++n) {
    const std::int64_t pos_num = n * step_num;       // in units of 1/den
    const std::int64_t base = pos_num / den;         // floor(t)
    const int phase = static_cast<int>(pos_num % den);
    const double *row =
        f.taps.data() + static_cast<std::size_t>(phase) * f.taps_per_phase;
    double acc = 0.0;
    const std::int64_t first = base - f.left_extent;
    if (first >= 0 && first + f.taps_per_phase <= n_in) {
      const double *seg = x + first;
      for (int j = 0; j < f.taps_per_phase; ++j) acc += row[j] * seg[j];
    } else {
      for (int j = 0; j < f.taps_per_phase; ++j)
        acc += row[j] * sample_at(first + j);
    }
    out.samples[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (length == 1 || kind == WindowKind::kRectangular) return w;
  const double denom = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n) {
    const double c = std::cos(2.0 * std::numbers::pi * n / denom);
    switch (kind) {
      case WindowKind::kHamming: w[n] = 0.54 - 0.46 * c; break;
      case WindowKind::kHann: w[n] = 0.5 - 0.5 * c; break;
      case WindowKind::kRectangular: break;
    }
  }
  return w;
}

FrameMatrix frame_and_window(const AudioClip &clip, double frame_ms,
                             double hop_ms, WindowKind window_kind,
                             double preemph) {
  if (hop_ms <= 0 || hop_ms > frame_ms)
    throw InvalidConfig("need 0 < hop_ms <= frame_ms");
  if (preemph < 0 || preemph >= 1)
    throw InvalidConfig("need 0 <= preemph < 1");

  const std::size_t frame_len = static_cast<std::size_t>(
      std::lround(frame_ms * clip.sample_rate_hz / 1000.0));
  const std::size_t hop_len = static_cast<std::size_t>(
      std::lround(hop_ms * clip.sample_rate_hz / 1000.0));
  if (frame_len == 0 || hop_len == 0)
    throw InvalidConfig("frame/hop shorter than one sample");
  const std::size_t n = clip.samples.size();
  if (n < frame_len)
    throw ClipTooShort("clip of " + std::to_string(n) +
                       " samples < frame of " + std::to_string(frame_len));

  std::vector<double> emphasized(n);
  emphasized[0] = clip.samples[0];
  for (std::size_t i = 1; i < n; ++i)
    emphasized[i] = clip.samples[i] - preemph * clip.samples[i - 1];

  FrameMatrix fm;
  fm.frame_len = frame_len;
  fm.hop_len = hop_len;
  fm.window_kind = window_kind;
  fm.num_frames = (n - frame_len) / hop_len + 1;
  fm.data.resize(fm.num_frames * frame_len);

  const std::vector<double> window = make_window(window_kind, frame_len);
  double window_energy = 0.0;
  for (double w : window) window_energy += w * w;
  if (window_energy <= 0.0)
    throw InvalidConfig("window energy is zero at frame length " +
                        std::to_string(frame_len));
  for (std::size_t t = 0; t < fm.num_frames; ++t) {
    const double *src = emphasized.data() + t * hop_len;
    double *dst = fm.data.data() + t * frame_len;
    for (std::size_t i = 0; i < frame_len; ++i) dst[i] = src[i] * window[i];
  }
  return fm;
}

}  // namespace spoofcm
