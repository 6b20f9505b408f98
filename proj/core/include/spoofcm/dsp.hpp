// core/include/spoofcm/dsp.hpp

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

#ifndef SPOOFCM_DSP_HPP_
#define SPOOFCM_DSP_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spoofcm {

/// In-place iterative radix-2 FFT. size must be a power of two.
void fft(std::vector<std::complex<double>> &buf, bool inverse = false);

/// |FFT|^2 / fft_size of a zero-padded real frame; returns fft_size/2 + 1
/// nonnegative bins. fft_size must be a power of two and >= frame length.
std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::size_t fft_size);

/// Orthonormal DCT-II basis, row-major [num_coeffs x n]:
///   C[k][i] = s_k * cos(pi * k * (2i + 1) / (2n)),
///   s_0 = sqrt(1/n), s_k = sqrt(2/n) for k > 0.
/// Applying the transpose inverts the transform.
std::vector<double> dct2_basis(std::size_t num_coeffs, std::size_t n);

/// First num_coeffs orthonormal DCT-II coefficients of x.
std::vector<double> dct2(std::span<const double> x, std::size_t num_coeffs);

/// Piecewise-linear interpolant through (xs, ys) evaluated at x; xs must be
/// strictly increasing. Outside [xs.front(), xs.back()] the nearest knot
/// value is held constant.
double linear_interp(std::span<const double> xs, std::span<const double> ys,
                     double x);

/// Autocorrelation-method LPC. Returns {a_1..a_order, gain^2} where the
/// prediction filter is A(z) = 1 - sum a_i z^-i and gain^2 is the residual
/// energy per sample. Falls back to zero coefficients on silent frames.
struct LpcResult {
  std::vector<double> coeffs;
  double gain_sq = 0.0;
};
LpcResult lpc_analyze(std::span<const double> frame, std::size_t order);

/// Log magnitude response of an LPC synthesis filter g / A(z) at num_points
/// frequencies uniformly spanning (0, pi).
std::vector<double> lpc_log_envelope(const LpcResult &lpc,
                                     std::size_t num_points);

/// Autocorrelation pitch estimate over [f_min, f_max] Hz. Returns 0 when the
/// frame is unvoiced (normalized peak below the threshold) or silent.
double estimate_f0(std::span<const double> frame, int sample_rate_hz,
                   double f_min = 60.0, double f_max = 400.0,
                   double voicing_threshold = 0.30);

}  // namespace spoofcm

#endif  // SPOOFCM_DSP_HPP_
