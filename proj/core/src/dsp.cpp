// core/src/dsp.cpp

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

#include "spoofcm/dsp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "spoofcm/error.hpp"

namespace spoofcm {

void fft(std::vector<std::complex<double>> &buf, bool inverse) {
  const std::size_t n = buf.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw InvalidConfig("fft size must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(buf[i], buf[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang =
        (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = buf[i + k];
        const std::complex<double> v = buf[i + k + len / 2] * w;
        buf[i + k] = u + v;
        buf[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto &c : buf) c /= static_cast<double>(n);
}

std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::size_t fft_size) {
  if (frame.size() > fft_size)
    throw InvalidConfig("frame longer than fft size");
  std::vector<std::complex<double>> buf(fft_size, {0.0, 0.0});
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  fft(buf);
  std::vector<double> p(fft_size / 2 + 1);
  for (std::size_t k = 0; k < p.size(); ++k)
    p[k] = std::norm(buf[k]) / static_cast<double>(fft_size);
  return p;
}

std::vector<double> dct2_basis(std::size_t num_coeffs, std::size_t n) {
  std::vector<double> basis(num_coeffs * n);
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < num_coeffs; ++k) {
    const double scale = (k == 0) ? s0 : sk;
    for (std::size_t i = 0; i < n; ++i)
      basis[k * n + i] =
          scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                           (2.0 * static_cast<double>(i) + 1.0) /
                           (2.0 * static_cast<double>(n)));
  }
  return basis;
}

std::vector<double> dct2(std::span<const double> x, std::size_t num_coeffs) {
  const std::vector<double> basis = dct2_basis(num_coeffs, x.size());
  std::vector<double> out(num_coeffs, 0.0);
  for (std::size_t k = 0; k < num_coeffs; ++k) {
    const double *row = basis.data() + k * x.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += row[i] * x[i];
    out[k] = acc;
  }
  return out;
}

double linear_interp(std::span<const double> xs, std::span<const double> ys,
                     double x) {
  if (xs.empty() || xs.size() != ys.size())
    throw InvalidConfig("interp needs matching non-empty knots");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

LpcResult lpc_analyze(std::span<const double> frame, std::size_t order) {
  LpcResult res;
  res.coeffs.assign(order, 0.0);
  const std::size_t n = frame.size();
  if (n <= order) return res;

  std::vector<double> r(order + 1, 0.0);
  for (std::size_t lag = 0; lag <= order; ++lag) {
    double acc = 0.0;
    for (std::size_t i = lag; i < n; ++i) acc += frame[i] * frame[i - lag];
    r[lag] = acc;
  }
  if (r[0] <= 1e-30) return res;  // silence

  // Levinson-Durbin with a small diagonal load for stability.
  r[0] *= 1.0 + 1e-9;
  std::vector<double> a(order + 1, 0.0), tmp(order + 1, 0.0);
  double err = r[0];
  for (std::size_t i = 1; i <= order; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc -= a[j] * r[i - j];
    const double k = acc / err;
    tmp = a;
    a[i] = k;
    for (std::size_t j = 1; j < i; ++j) a[j] = tmp[j] - k * tmp[i - j];
    err *= 1.0 - k * k;
    if (err <= 0) {  // numerically pathological frame
      err = 1e-12 * r[0];
      break;
    }
  }
  for (std::size_t j = 1; j <= order; ++j) res.coeffs[j - 1] = a[j];
  res.gain_sq = err / static_cast<double>(n);
  return res;
}

std::vector<double> lpc_log_envelope(const LpcResult &lpc,
                                     std::size_t num_points) {
  std::vector<double> env(num_points);
  const double g_sq = std::max(lpc.gain_sq, 1e-30);
  for (std::size_t i = 0; i < num_points; ++i) {
    const double w = std::numbers::pi * (static_cast<double>(i) + 0.5) /
                     static_cast<double>(num_points);
    std::complex<double> a(1.0, 0.0);
    for (std::size_t j = 0; j < lpc.coeffs.size(); ++j) {
      const double ang = -w * (static_cast<double>(j) + 1.0);
      a -= lpc.coeffs[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    env[i] = 0.5 * std::log(g_sq) - std::log(std::max(std::abs(a), 1e-15));
  }
  return env;
}

double estimate_f0(std::span<const double> frame, int sample_rate_hz,
                   double f_min, double f_max, double voicing_threshold) {
  const std::size_t n = frame.size();
  const std::size_t lag_min = static_cast<std::size_t>(sample_rate_hz / f_max);
  const std::size_t lag_max = static_cast<std::size_t>(sample_rate_hz / f_min);
  if (lag_min < 1 || lag_max + 1 >= n) return 0.0;

  double energy = 0.0;
  for (double v : frame) energy += v * v;
  if (energy < 1e-12) return 0.0;

  double best_corr = 0.0;
  std::size_t best_lag = 0;
  for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
    double acc = 0.0;
    for (std::size_t i = lag; i < n; ++i) acc += frame[i] * frame[i - lag];
    if (acc > best_corr) {
      best_corr = acc;
      best_lag = lag;
    }
  }
  if (best_lag == 0 || best_corr / energy < voicing_threshold) return 0.0;
  return static_cast<double>(sample_rate_hz) / static_cast<double>(best_lag);
}

}  // namespace spoofcm
