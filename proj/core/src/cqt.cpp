// core/src/cqt.cpp

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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spoofcm/dsp.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/features.hpp"

namespace spoofcm {

namespace {

// Above this many total kernel samples the per-bin tables would get large
// (the reference 96x9 geometry needs ~20M), so the kernels are regenerated
// on the fly instead of cached. Both paths use the same phasor recurrence.
constexpr std::size_t kMaxKernelTableSamples = 8u << 20;

// Renormalize the recurrence phasors every this many steps; keeps the
// accumulated rounding drift around 1e-13 even for 100k-sample windows.
constexpr int kRenormInterval = 512;

struct BinGeometry {
  double freq_hz;
  double omega;        // 2 pi f / fs
  std::size_t win_len;
};

// Hann-windowed complex exponential, evaluated with two phasor recurrences.
// emit(n, re, im) receives w[n] * e^{-i omega n} for n in [n_begin, n_end).
template <typename Emit>
void run_kernel(const BinGeometry &bin, std::size_t n_begin, std::size_t n_end,
                Emit &&emit) {
  const std::size_t len = bin.win_len;
  const double win_step = len > 1
      ? 2.0 * std::numbers::pi / static_cast<double>(len - 1)
      : 0.0;
  // fast-forward both phasors to n_begin
  double cr = std::cos(bin.omega * static_cast<double>(n_begin));
  double ci = -std::sin(bin.omega * static_cast<double>(n_begin));
  double wr = std::cos(win_step * static_cast<double>(n_begin));
  double wi = std::sin(win_step * static_cast<double>(n_begin));
  const double csr = std::cos(bin.omega), csi = -std::sin(bin.omega);
  const double wsr = std::cos(win_step), wsi = std::sin(win_step);

  int since_renorm = 0;
  for (std::size_t n = n_begin; n < n_end; ++n) {
    const double w = len > 1 ? 0.5 - 0.5 * wr : 1.0;
    emit(n, w * cr, w * ci);
    const double ncr = cr * csr - ci * csi;
    ci = cr * csi + ci * csr;
    cr = ncr;
    const double nwr = wr * wsr - wi * wsi;
    wi = wr * wsi + wi * wsr;
    wr = nwr;
    if (++since_renorm == kRenormInterval) {
      since_renorm = 0;
      const double cm = std::sqrt(cr * cr + ci * ci);
      cr /= cm;
      ci /= cm;
      const double wm = std::sqrt(wr * wr + wi * wi);
      wr /= wm;
      wi /= wm;
    }
  }
}

}  // namespace

CqtMatrix cqt(const AudioClip &clip, int bins_per_octave, int octaves,
              double fmax_hz, double hop_ms) {
  if (bins_per_octave < 1 || octaves < 1)
    throw InvalidConfig("bad constant-Q geometry");
  if (fmax_hz <= 0 || fmax_hz > clip.sample_rate_hz / 2.0)
    throw InvalidConfig("need 0 < fmax <= Nyquist");
  if (clip.samples.empty()) throw EmptyAudio("cqt on empty clip");

  const int fs = clip.sample_rate_hz;
  const double fmin = fmax_hz / std::pow(2.0, octaves);
  const double quality = 1.0 / (std::pow(2.0, 1.0 / bins_per_octave) - 1.0);
  const std::size_t num_bins =
      static_cast<std::size_t>(bins_per_octave) * octaves;
  const std::size_t n = clip.samples.size();

  std::vector<BinGeometry> bins(num_bins);
  std::size_t total_kernel = 0;
  for (std::size_t k = 0; k < num_bins; ++k) {
    const double f = fmin * std::pow(2.0, static_cast<double>(k) / bins_per_octave);
    bins[k].freq_hz = f;
    bins[k].omega = 2.0 * std::numbers::pi * f / fs;
    bins[k].win_len = static_cast<std::size_t>(std::ceil(quality * fs / f));
    total_kernel += bins[k].win_len;
  }
  if (bins[0].win_len > n)
    throw WindowExceedsSignal("lowest bin needs " +
                              std::to_string(bins[0].win_len) +
                              " samples, clip has " + std::to_string(n));

  const std::size_t hop =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(
                                    hop_ms * fs / 1000.0)));
  CqtMatrix out;
  out.num_bins = num_bins;
  out.hop_len = hop;
  out.num_frames = (n - 1) / hop + 1;
  out.values.assign(out.num_frames * num_bins, {0.0, 0.0});
  out.bin_freqs_hz.resize(num_bins);
  out.window_lens.resize(num_bins);
  for (std::size_t k = 0; k < num_bins; ++k) {
    out.bin_freqs_hz[k] = bins[k].freq_hz;
    out.window_lens[k] = bins[k].win_len;
  }

  const bool use_table = total_kernel <= kMaxKernelTableSamples;
  std::vector<double> table_re, table_im;
  std::vector<std::size_t> table_off;
  if (use_table) {
    table_re.resize(total_kernel);
    table_im.resize(total_kernel);
    table_off.resize(num_bins);
    std::size_t off = 0;
    for (std::size_t k = 0; k < num_bins; ++k) {
      table_off[k] = off;
      run_kernel(bins[k], 0, bins[k].win_len, [&](std::size_t nn, double re, double im) {
        table_re[off + nn] = re;
        table_im[off + nn] = im;
      });
      off += bins[k].win_len;
    }
  }

  const double *x = clip.samples.data();
  for (std::size_t t = 0; t < out.num_frames; ++t) {
    const std::int64_t center = static_cast<std::int64_t>(t * hop);
    for (std::size_t k = 0; k < num_bins; ++k) {
      const std::size_t len = bins[k].win_len;
      const std::int64_t start = center - static_cast<std::int64_t>(len - 1) / 2;
      // clamp the kernel index range to the part of the window inside the clip
      const std::size_t n_begin = static_cast<std::size_t>(std::max<std::int64_t>(0, -start));
      const std::size_t n_end = static_cast<std::size_t>(std::clamp<std::int64_t>(
          static_cast<std::int64_t>(n) - start, 0, static_cast<std::int64_t>(len)));
      double acc_re = 0.0, acc_im = 0.0;
      if (n_begin < n_end) {
        // the clamped range keeps start + nn inside [0, n)
        const double *seg = x + (start + static_cast<std::int64_t>(n_begin));
        if (use_table) {
          const double *kr = table_re.data() + table_off[k] + n_begin;
          const double *ki = table_im.data() + table_off[k] + n_begin;
          const std::size_t count = n_end - n_begin;
          for (std::size_t nn = 0; nn < count; ++nn) {
            acc_re += seg[nn] * kr[nn];
            acc_im += seg[nn] * ki[nn];
          }
        } else {
          run_kernel(bins[k], n_begin, n_end, [&](std::size_t nn, double re, double im) {
            acc_re += seg[nn - n_begin] * re;
            acc_im += seg[nn - n_begin] * im;
          });
        }
      }
      const double scale = 1.0 / static_cast<double>(len);
      out.values[t * num_bins + k] = {acc_re * scale, acc_im * scale};
    }
  }
  return out;
}

FeatureMatrix cqcc(const AudioClip &clip, const FeatureConfig &cfg) {
  cfg.validate();
  if (cfg.kind != FeatureKind::kCqcc)
    throw InvalidConfig("cqcc called with non-cqcc config");

  const double fmax = cfg.fmax_hz > 0 ? cfg.fmax_hz : clip.sample_rate_hz / 2.0;
  const CqtMatrix cq = cqt(clip, cfg.cqt_bins_per_octave, cfg.cqt_octaves,
                           fmax, cfg.cqt_hop_ms);

  // Uniform frequency grid for the geometric-to-linear resampling step.
  const double fmin = fmax / std::pow(2.0, cfg.cqt_octaves);
  const std::size_t grid_size =
      static_cast<std::size_t>(cfg.resample_period) * cfg.cqt_octaves;
  std::vector<double> grid_hz(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j)
    grid_hz[j] = fmin + (fmax - fmin) * static_cast<double>(j) /
                            static_cast<double>(grid_size - 1);

  const int first_cep = cfg.include_c0 ? 0 : 1;
  const std::size_t num_rows = static_cast<std::size_t>(cfg.num_ceps) + first_cep;
  const std::vector<double> basis = dct2_basis(num_rows, grid_size);

  FeatureMatrix out;
  out.num_frames = cq.num_frames;
  out.dim = static_cast<std::size_t>(cfg.num_ceps);
  out.config = cfg;
  out.utt_id = clip.utt_id;
  out.values.resize(out.num_frames * out.dim);

  std::vector<double> log_power(cq.num_bins), resampled(grid_size);
  for (std::size_t t = 0; t < cq.num_frames; ++t) {
    for (std::size_t k = 0; k < cq.num_bins; ++k)
      log_power[k] =
          std::log(std::max(std::norm(cq.values[t * cq.num_bins + k]),
                            cfg.log_floor));
    for (std::size_t j = 0; j < grid_size; ++j)
      resampled[j] = linear_interp(cq.bin_freqs_hz, log_power, grid_hz[j]);
    double *dst = out.values.data() + t * out.dim;
    for (int c = 0; c < cfg.num_ceps; ++c) {
      const double *brow =
          basis.data() + static_cast<std::size_t>(c + first_cep) * grid_size;
      double acc = 0.0;
      for (std::size_t j = 0; j < grid_size; ++j) acc += brow[j] * resampled[j];
      dst[c] = acc;
    }
  }
  return stack_dynamics(out, cfg.dynamics);
}

}  // namespace spoofcm
