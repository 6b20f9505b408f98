// tests/acceptance_main.cpp

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

// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits nonzero if any selected criterion fails. With no arguments all nine
// run; otherwise the arguments select criteria by number.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spoofcm/audio.hpp"
#include "spoofcm/dsp.hpp"
#include "spoofcm/error.hpp"
#include "spoofcm/experiment.hpp"
#include "spoofcm/features.hpp"
#include "spoofcm/gbdt.hpp"
#include "spoofcm/gmm.hpp"
#include "spoofcm/io_util.hpp"
#include "spoofcm/manifest.hpp"
#include "spoofcm/metrics.hpp"
#include "spoofcm/rng.hpp"
#include "spoofcm/synth.hpp"

using namespace spoofcm;
namespace fs = std::filesystem;

namespace {

struct CheckFailure {
  std::string what;
};

void require(bool ok, const std::string &what) {
  if (!ok) throw CheckFailure{what};
}

// ---------------------------------------------------------------------------
// shared oracles (test-side, independent of the library implementations)

struct BruteForce {
  double min_dcf;
  double eer;
};

BruteForce brute_force_metrics(const ScoreSet &scores, double beta_value) {
  std::vector<double> taus{-std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()};
  for (const ScoreEntry &e : scores.entries) taus.push_back(e.score);
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

  std::vector<std::pair<double, double>> pts;  // miss, fa
  for (double tau : taus) {
    std::size_t miss = 0, fa = 0, nb = 0, ns = 0;
    for (const ScoreEntry &e : scores.entries) {
      if (e.label == Label::kBonafide) {
        ++nb;
        if (e.score < tau) ++miss;
      } else {
        ++ns;
        if (e.score >= tau) ++fa;
      }
    }
    pts.push_back({static_cast<double>(miss) / nb, static_cast<double>(fa) / ns});
  }
  BruteForce r{std::numeric_limits<double>::infinity(), 1.0};
  for (const auto &[miss, fa] : pts)
    r.min_dcf = std::min(r.min_dcf, beta_value * miss + fa);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double diff = pts[i].first - pts[i].second;
    if (diff < 0) continue;
    if (diff == 0 || i == 0) {
      r.eer = pts[i].first;
      break;
    }
    const auto &[m1, f1] = pts[i - 1];
    const auto &[m2, f2] = pts[i];
    const double denom = (m2 - m1) - (f2 - f1);
    r.eer = denom <= 0 ? 0.5 * (m2 + f2) : m1 + (f1 - m1) / denom * (m2 - m1);
    break;
  }
  return r;
}

std::vector<double> oracle_dct2(const std::vector<double> &x, std::size_t m) {
  const std::size_t n = x.size();
  std::vector<double> out(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += x[i] * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
    out[k] = acc * (k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n));
  }
  return out;
}

void require_close(const std::vector<double> &got,
                   const std::vector<double> &expect, double tol,
                   const std::string &what) {
  require(got.size() == expect.size(), what + ": size mismatch");
  double scale = 1.0, worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    scale = std::max({scale, std::abs(got[i]), std::abs(expect[i])});
    worst = std::max(worst, std::abs(got[i] - expect[i]));
  }
  require(worst <= tol * scale, what + ": max deviation " +
                                    format_double(worst) + " over scale " +
                                    format_double(scale));
}

AudioClip make_tone(double freq_hz, double duration_s, int rate) {
  AudioClip clip;
  clip.sample_rate_hz = rate;
  clip.utt_id = "tone";
  const std::size_t n = static_cast<std::size_t>(std::lround(duration_s * rate));
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    clip.samples[i] = 0.5 * std::sin(2.0 * std::numbers::pi * freq_hz * i / rate);
  return clip;
}

// ---------------------------------------------------------------------------
// criteria

// beta(1, 10, 0.05) = 1.9 exactly (rational check 0.95/0.5)
void criterion_1() {
  const double b = beta({1.0, 10.0, 0.05});
  require(b == 0.95 / 0.5, "beta != 0.95/0.5");
  require(b == 1.9, "beta != 1.9");
}

// eer/min_dcf match the O(n^2) brute force within 1e-12 over 1000 sets
void criterion_2() {
  Rng rng(2024);
  const CostParams costs;
  const double b = beta(costs);
  for (int trial = 0; trial < 1000; ++trial) {
    ScoreSet s;
    const std::size_t nb = 1 + rng.below(100);
    const std::size_t ns = 1 + rng.below(100);
    for (std::size_t i = 0; i < nb; ++i) {
      const double v =
          rng.below(2) ? rng.normal() : std::round(rng.normal() * 4.0) / 4.0;
      s.entries.push_back({"b" + std::to_string(i), v + 0.4, Label::kBonafide});
    }
    for (std::size_t i = 0; i < ns; ++i) {
      const double v =
          rng.below(2) ? rng.normal() : std::round(rng.normal() * 4.0) / 4.0;
      s.entries.push_back({"s" + std::to_string(i), v, Label::kSpoof});
    }
    const BruteForce bf = brute_force_metrics(s, b);
    const double dcf = min_dcf(s, costs);
    const double e = eer(s);
    require(std::abs(dcf - bf.min_dcf) <= 1e-12,
            "minDCF mismatch at trial " + std::to_string(trial) + ": " +
                format_double(dcf) + " vs " + format_double(bf.min_dcf));
    require(std::abs(e - bf.eer) <= 1e-12,
            "EER mismatch at trial " + std::to_string(trial) + ": " +
                format_double(e) + " vs " + format_double(bf.eer));
  }
}

// inverted scores hit EER 100% / minDCF 1.00; separable scores hit 0/0
void criterion_3() {
  ScoreSet inverted;
  for (int i = 0; i < 50; ++i) {
    inverted.entries.push_back({"b" + std::to_string(i), static_cast<double>(i),
                                Label::kBonafide});
    inverted.entries.push_back({"s" + std::to_string(i),
                                static_cast<double>(i) + 100.0, Label::kSpoof});
  }
  require(eer(inverted) == 1.0, "inverted EER != 1.0");
  require(min_dcf(inverted, CostParams{}) == 1.0, "inverted minDCF != 1.0");

  ScoreSet separable;
  for (int i = 0; i < 50; ++i) {
    separable.entries.push_back({"b" + std::to_string(i),
                                 static_cast<double>(i) + 100.0, Label::kBonafide});
    separable.entries.push_back({"s" + std::to_string(i), static_cast<double>(i),
                                 Label::kSpoof});
  }
  require(eer(separable) == 0.0, "separable EER != 0");
  require(min_dcf(separable, CostParams{}) == 0.0, "separable minDCF != 0");
}

// EM log-likelihood monotone over 50 random mixtures; K=1 closed form
void criterion_4() {
  Rng rng(4000);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + static_cast<int>(rng.below(4));
    const int k = 1 + static_cast<int>(rng.below(3));
    const std::size_t per_cluster = 40 + rng.below(80);
    FrameSet data;
    data.dim = static_cast<std::size_t>(dim);
    const int clusters = 1 + static_cast<int>(rng.below(3));
    std::vector<double> row(static_cast<std::size_t>(dim));
    for (int c = 0; c < clusters; ++c) {
      std::vector<double> center(static_cast<std::size_t>(dim));
      for (auto &v : center) v = 4.0 * rng.normal();
      const double spread = 0.5 + rng.uniform();
      for (std::size_t i = 0; i < per_cluster; ++i) {
        for (int d = 0; d < dim; ++d)
          row[static_cast<std::size_t>(d)] =
              center[static_cast<std::size_t>(d)] + spread * rng.normal();
        data.append(row);
      }
    }
    GmmFitOptions opts;
    opts.num_components = k;
    opts.seed = 42 + static_cast<std::uint64_t>(trial);
    const GmmFitResult fit = gmm_fit_em(data, opts);
    require(fit.ll_trace.size() >= 2, "trace too short");
    for (std::size_t i = 1; i < fit.ll_trace.size(); ++i)
      require(fit.ll_trace[i] >= fit.ll_trace[i - 1] - 1e-8,
              "LL decreased at iteration " + std::to_string(i) + " of trial " +
                  std::to_string(trial));
  }

  // K=1 closed form: sample mean, biased sample covariance + M-step ridge
  Rng rng2(4001);
  FrameSet data;
  data.dim = 3;
  std::vector<double> row(3);
  for (int i = 0; i < 500; ++i) {
    for (auto &v : row) v = 1.0 + 2.0 * rng2.normal();
    data.append(row);
  }
  GmmFitOptions opts;
  opts.num_components = 1;
  const GmmModel m = gmm_fit_em(data, opts).model;
  std::vector<double> mean(3, 0.0);
  for (std::size_t i = 0; i < data.rows; ++i)
    for (int d = 0; d < 3; ++d)
      mean[static_cast<std::size_t>(d)] += data.row(i)[d] / data.rows;
  std::vector<double> cov(9, 0.0);
  for (std::size_t i = 0; i < data.rows; ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        cov[static_cast<std::size_t>(a * 3 + b)] +=
            (data.row(i)[a] - mean[static_cast<std::size_t>(a)]) *
            (data.row(i)[b] - mean[static_cast<std::size_t>(b)]) / data.rows;
  const double ridge = 1e-6 * (cov[0] + cov[4] + cov[8]) / 3.0;
  for (int d = 0; d < 3; ++d) cov[static_cast<std::size_t>(d * 3 + d)] += ridge;
  for (int d = 0; d < 3; ++d)
    require(std::abs(m.means[static_cast<std::size_t>(d)] -
                     mean[static_cast<std::size_t>(d)]) <= 1e-10,
            "K=1 mean beyond 1e-10");
  for (int i = 0; i < 9; ++i)
    require(std::abs(m.covariances[static_cast<std::size_t>(i)] -
                     cov[static_cast<std::size_t>(i)]) <= 1e-10,
            "K=1 covariance beyond 1e-10");
}

// logistic gradients vs central differences; monotone loss; separable data
void criterion_5() {
  Rng rng(5000);
  std::vector<PooledVector> examples;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) {
    examples.push_back({{rng.normal(), rng.normal()}, "x" + std::to_string(i)});
    labels.push_back(rng.below(2) ? 1 : 0);
  }
  auto total_logloss = [&](const std::vector<double> &raw) {
    double acc = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double f = raw[i];
      const double sp =
          f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
      acc += sp - labels[i] * f;
    }
    return acc;
  };
  GbdtParams params;
  params.num_trees = 15;
  double prev_loss = std::numeric_limits<double>::infinity();
  const BoostObserver observer = [&](const BoostRound &round) {
    for (std::size_t i = 0; i < round.raw_scores.size(); i += 5) {
      std::vector<double> up = round.raw_scores, down = round.raw_scores;
      const double eps = 1e-6;
      up[i] += eps;
      down[i] -= eps;
      const double fd = (total_logloss(up) - total_logloss(down)) / (2.0 * eps);
      require(std::abs(fd - round.gradients[i]) <=
                  1e-6 * std::max(1.0, std::abs(round.gradients[i])),
              "gradient mismatch in round " + std::to_string(round.round));
    }
    require(round.train_logloss <= prev_loss + 1e-8,
            "log-loss increased in round " + std::to_string(round.round));
    prev_loss = round.train_logloss;
  };
  gbdt_fit(examples, labels, params, observer);

  // clean 1-D margin: training accuracy 1.0 within 20 trees, both presets
  std::vector<PooledVector> sep;
  std::vector<int> sep_labels;
  for (int i = 0; i < 80; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    sep.push_back({{x}, "s" + std::to_string(i)});
    sep_labels.push_back(x > 0 ? 1 : 0);
  }
  for (GbdtPreset preset : {GbdtPreset::kDepthwise, GbdtPreset::kSymmetric}) {
    GbdtParams p;
    p.num_trees = 20;
    p.max_depth = 3;
    p.preset = preset;
    const GbdtFitResult fit = gbdt_fit(sep, sep_labels, p);
    for (std::size_t i = 0; i < sep.size(); ++i) {
      const double s = gbdt_score(fit.model, sep[i]);
      require((s > 0) == (sep_labels[i] == 1),
              std::string("separable data misclassified under ") +
                  to_string(preset));
    }
  }
}

// golden front-end suite vs brute-force reimplementations
void criterion_6() {
  // --- MFCC / LFCC on 440 Hz and 1 kHz tones -----------------------------
  for (const double freq : {440.0, 1000.0}) {
    const AudioClip tone = make_tone(freq, 0.2, 16000);
    for (const FeatureKind kind : {FeatureKind::kMfcc, FeatureKind::kLfcc}) {
      FeatureConfig cfg;
      cfg.kind = kind;
      cfg.dynamics = Dynamics::kStatic;
      cfg.include_c0 = true;
      const FrameMatrix frames = frame_and_window(tone, cfg.frame_ms, cfg.hop_ms,
                                                  cfg.window, cfg.preemph);
      const FeatureMatrix fm = kind == FeatureKind::kMfcc
                                   ? mfcc(frames, cfg, 16000)
                                   : lfcc(frames, cfg, 16000);
      // oracle band grid
      std::vector<double> grid(42);
      for (int i = 0; i < 42; ++i) {
        if (kind == FeatureKind::kMfcc) {
          const double hi = 2595.0 * std::log10(1.0 + 8000.0 / 700.0);
          grid[static_cast<std::size_t>(i)] =
              700.0 * (std::pow(10.0, hi * i / 41.0 / 2595.0) - 1.0);
        } else {
          grid[static_cast<std::size_t>(i)] = 8000.0 * i / 41.0;
        }
      }
      for (std::size_t t = 0; t < fm.num_frames; t += 6) {
        std::vector<double> frame(frames.frame(t),
                                  frames.frame(t) + frames.frame_len);
        std::vector<double> power(257);
        for (std::size_t k = 0; k < power.size(); ++k) {
          std::complex<double> acc(0.0, 0.0);
          for (std::size_t i = 0; i < frame.size(); ++i) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(i) / 512.0;
            acc += frame[i] * std::complex<double>(std::cos(ang), std::sin(ang));
          }
          power[k] = std::norm(acc) / 512.0;
        }
        std::vector<double> log_e(40);
        for (int m = 0; m < 40; ++m) {
          double e = 0.0;
          for (std::size_t k = 0; k < power.size(); ++k) {
            const double f = k * 16000.0 / 512.0;
            double w = 0.0;
            if (f > grid[m] && f < grid[m + 1])
              w = (f - grid[m]) / (grid[m + 1] - grid[m]);
            else if (f >= grid[m + 1] && f < grid[m + 2])
              w = (grid[m + 2] - f) / (grid[m + 2] - grid[m + 1]);
            e += w * power[k];
          }
          log_e[static_cast<std::size_t>(m)] = std::log(std::max(e, 1e-10));
        }
        require_close(std::vector<double>(fm.frame(t), fm.frame(t) + fm.dim),
                      oracle_dct2(log_e, 20), 1e-6,
                      std::string(to_string(kind)) + " golden frame");
      }
    }
  }

  // --- silence closed forms ----------------------------------------------
  {
    AudioClip silence;
    silence.sample_rate_hz = 16000;
    silence.samples.assign(16000, 0.0);
    silence.utt_id = "sil";
    FeatureConfig cfg;
    cfg.dynamics = Dynamics::kStatic;
    cfg.include_c0 = true;
    const FrameMatrix frames = frame_and_window(silence, 25.0, 10.0,
                                                WindowKind::kHamming, 0.97);
    for (const FeatureKind kind : {FeatureKind::kMfcc, FeatureKind::kLfcc}) {
      cfg.kind = kind;
      const FeatureMatrix fm = kind == FeatureKind::kMfcc
                                   ? mfcc(frames, cfg, 16000)
                                   : lfcc(frames, cfg, 16000);
      const double c0 = std::sqrt(40.0) * std::log(1e-10);
      for (std::size_t t = 0; t < fm.num_frames; ++t) {
        require(std::abs(fm.at(t, 0) - c0) <= 1e-9 * std::abs(c0),
                "silence c0 mismatch");
        for (std::size_t d = 1; d < fm.dim; ++d)
          require(std::abs(fm.at(t, d)) <= 1e-9, "silence higher cep nonzero");
      }
    }
    FeatureConfig ccfg = cfg;
    ccfg.kind = FeatureKind::kCqcc;
    ccfg.cqt_bins_per_octave = 12;
    ccfg.cqt_octaves = 7;
    const FeatureMatrix cq = cqcc(silence, ccfg);
    const double c0 = std::sqrt(112.0) * std::log(1e-10);
    for (std::size_t t = 0; t < cq.num_frames; ++t) {
      require(std::abs(cq.at(t, 0) - c0) <= 1e-9 * std::abs(c0),
              "cqcc silence c0 mismatch");
      for (std::size_t d = 1; d < cq.dim; ++d)
        require(std::abs(cq.at(t, d)) <= 1e-9, "cqcc silence cep nonzero");
    }
  }

  // --- CQCC, reference 96x9 geometry, 440 Hz ------------------------------
  {
    const AudioClip tone = make_tone(440.0, 9.2, 16000);
    FeatureConfig cfg;
    cfg.kind = FeatureKind::kCqcc;
    cfg.dynamics = Dynamics::kStatic;
    cfg.include_c0 = true;
    cfg.cqt_hop_ms = 2000.0;  // a handful of frames keeps the oracle tractable
    const FeatureMatrix fm = cqcc(tone, cfg);

    const int B = 96, oct = 9;
    const double fmax = 8000.0, fmin = fmax / 512.0;
    const double quality = 1.0 / (std::pow(2.0, 1.0 / B) - 1.0);
    const std::size_t num_bins = 864, hop = 32000, grid_n = 16 * 9;
    for (std::size_t t = 0; t < fm.num_frames; t += 2) {
      std::vector<double> freqs(num_bins), logp(num_bins);
      for (std::size_t k = 0; k < num_bins; ++k) {
        const double f = fmin * std::pow(2.0, static_cast<double>(k) / B);
        freqs[k] = f;
        const std::size_t len =
            static_cast<std::size_t>(std::ceil(quality * 16000.0 / f));
        const std::int64_t start = static_cast<std::int64_t>(t * hop) -
                                   static_cast<std::int64_t>(len - 1) / 2;
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < len; ++i) {
          const std::int64_t idx = start + static_cast<std::int64_t>(i);
          if (idx < 0 || idx >= static_cast<std::int64_t>(tone.samples.size()))
            continue;
          const double w =
              0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (len - 1));
          const double ang =
              -2.0 * std::numbers::pi * f * static_cast<double>(i) / 16000.0;
          acc += tone.samples[static_cast<std::size_t>(idx)] * w *
                 std::complex<double>(std::cos(ang), std::sin(ang));
        }
        const double mag = std::abs(acc) / static_cast<double>(len);
        logp[k] = std::log(std::max(mag * mag, cfg.log_floor));
      }
      std::vector<double> resampled(grid_n);
      for (std::size_t j = 0; j < grid_n; ++j) {
        const double f = fmin + (fmax - fmin) * static_cast<double>(j) / (grid_n - 1);
        if (f <= freqs.front()) {
          resampled[j] = logp.front();
        } else if (f >= freqs.back()) {
          resampled[j] = logp.back();
        } else {
          std::size_t hi = 1;
          while (freqs[hi] < f) ++hi;
          const double u = (f - freqs[hi - 1]) / (freqs[hi] - freqs[hi - 1]);
          resampled[j] = logp[hi - 1] + u * (logp[hi] - logp[hi - 1]);
        }
      }
      require_close(std::vector<double>(fm.frame(t), fm.frame(t) + fm.dim),
                    oracle_dct2(resampled, 20), 1e-6, "cqcc 96x9 golden frame");
    }

    // 1 kHz at the desk geometry, full pipeline
    const AudioClip khz = make_tone(1000.0, 1.5, 16000);
    FeatureConfig dcfg = cfg;
    dcfg.cqt_bins_per_octave = 12;
    dcfg.cqt_octaves = 7;
    dcfg.cqt_hop_ms = 100.0;
    const FeatureMatrix dfm = cqcc(khz, dcfg);
    const double dfmin = 8000.0 / 128.0;
    const double dq = 1.0 / (std::pow(2.0, 1.0 / 12.0) - 1.0);
    for (std::size_t t = 2; t < dfm.num_frames; t += 5) {
      std::vector<double> freqs(84), logp(84);
      for (std::size_t k = 0; k < 84; ++k) {
        const double f = dfmin * std::pow(2.0, static_cast<double>(k) / 12.0);
        freqs[k] = f;
        const std::size_t len =
            static_cast<std::size_t>(std::ceil(dq * 16000.0 / f));
        const std::int64_t start = static_cast<std::int64_t>(t * 1600) -
                                   static_cast<std::int64_t>(len - 1) / 2;
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < len; ++i) {
          const std::int64_t idx = start + static_cast<std::int64_t>(i);
          if (idx < 0 || idx >= static_cast<std::int64_t>(khz.samples.size()))
            continue;
          const double w =
              0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (len - 1));
          const double ang =
              -2.0 * std::numbers::pi * f * static_cast<double>(i) / 16000.0;
          acc += khz.samples[static_cast<std::size_t>(idx)] * w *
                 std::complex<double>(std::cos(ang), std::sin(ang));
        }
        const double mag = std::abs(acc) / static_cast<double>(len);
        logp[k] = std::log(std::max(mag * mag, dcfg.log_floor));
      }
      std::vector<double> resampled(112);
      for (std::size_t j = 0; j < 112; ++j) {
        const double f = dfmin + (8000.0 - dfmin) * static_cast<double>(j) / 111.0;
        if (f <= freqs.front()) {
          resampled[j] = logp.front();
        } else if (f >= freqs.back()) {
          resampled[j] = logp.back();
        } else {
          std::size_t hi = 1;
          while (freqs[hi] < f) ++hi;
          const double u = (f - freqs[hi - 1]) / (freqs[hi] - freqs[hi - 1]);
          resampled[j] = logp[hi - 1] + u * (logp[hi] - logp[hi - 1]);
        }
      }
      require_close(std::vector<double>(dfm.frame(t), dfm.frame(t) + dfm.dim),
                    oracle_dct2(resampled, 20), 1e-6, "cqcc 1 kHz golden frame");
    }
  }
}

// the published native counts validate; cross-split speakers are caught
void criterion_7() {
  Manifest m;
  struct Block {
    Split split;
    std::size_t bona, spoof, speakers;
  };
  const Block blocks[] = {{Split::kTrain, 5590, 33540, 112},
                          {Split::kDev, 800, 4800, 16},
                          {Split::kEval, 1600, 9600, 32}};
  int uid = 0;
  for (const Block &b : blocks) {
    for (std::size_t i = 0; i < b.bona + b.spoof; ++i) {
      ManifestEntry e;
      e.utt_id = "u" + std::to_string(uid++);
      e.path = "wav/" + e.utt_id + ".wav";
      e.speaker_id = std::string(to_string(b.split)) + "-spk" +
                     std::to_string(i % b.speakers);
      e.sex = (i % b.speakers) % 2 ? Sex::kFemale : Sex::kMale;
      e.domain = Domain::kNative;
      e.label = i < b.bona ? Label::kBonafide : Label::kSpoof;
      e.attack_id = i < b.bona ? "-" : "A0" + std::to_string(1 + i % 8);
      e.split = b.split;
      m.push_back(e);
    }
  }
  const ProtocolStats stats = validate_protocol(m);
  require(stats.warnings.empty(), "unexpected ratio warnings");
  const SplitStats &train = stats.per_cell.at({Domain::kNative, Split::kTrain});
  require(train.n_bonafide == 5590 && train.n_spoof == 33540,
          "train counts wrong");
  require(train.spoof_ratio() == 6.0, "train ratio != 6.0");
  const SplitStats &dev = stats.per_cell.at({Domain::kNative, Split::kDev});
  require(dev.n_bonafide == 800 && dev.n_spoof == 4800, "dev counts wrong");
  const SplitStats &eval_cell = stats.per_cell.at({Domain::kNative, Split::kEval});
  require(eval_cell.n_bonafide == 1600 && eval_cell.n_spoof == 9600,
          "eval counts wrong");

  ManifestEntry leak = m.front();
  leak.utt_id = "leak";
  leak.split = Split::kEval;
  m.push_back(leak);
  bool caught = false;
  try {
    validate_protocol(m);
  } catch (const SpeakerOverlap &) {
    caught = true;
  }
  require(caught, "cross-split speaker not detected");
}

ExperimentSettings default_acceptance_settings() {
  ExperimentSettings s;
  s.seed = 42;
  s.corpus.speakers_per_domain = 12;
  s.corpus.utts_per_speaker = 20;
  s.synthesize = true;
  return s;
}

const CellResult &find_cell(const ExperimentGrid &grid, int experiment,
                            FeatureKind feature, ClassifierKind classifier) {
  for (const CellResult &c : grid.cells)
    if (c.experiment == experiment && c.feature == feature &&
        c.classifier == classifier)
      return c;
  throw CheckFailure{"missing grid cell"};
}

// domain-shift direction on the default synthetic corpus, boosted-tree cells
void criterion_8() {
  ExperimentSettings s = default_acceptance_settings();
  s.classifiers = {ClassifierKind::kGbdtDepthwise, ClassifierKind::kGbdtSymmetric};
  const std::string out = "acceptance_c8";
  fs::remove_all(out);
  const ExperimentGrid grid = run_experiment(s, "", out);

  for (FeatureKind feature :
       {FeatureKind::kMfcc, FeatureKind::kLfcc, FeatureKind::kCqcc}) {
    for (ClassifierKind classifier :
         {ClassifierKind::kGbdtDepthwise, ClassifierKind::kGbdtSymmetric}) {
      const std::string cell_name =
          std::string(to_string(feature)) + "/" + to_string(classifier);
      const CellResult &native_cm = find_cell(grid, 1, feature, classifier);
      const CellResult &combined_cm = find_cell(grid, 2, feature, classifier);
      require(native_cm.ok, cell_name + " native arm failed: " + native_cm.error);
      require(combined_cm.ok,
              cell_name + " combined arm failed: " + combined_cm.error);

      const double native_in = native_cm.eval_native.eer;
      const double native_cross = native_cm.eval_nonnative.eer;
      const double combined_in = combined_cm.eval_native.eer;
      const double combined_cross = combined_cm.eval_nonnative.eer;

      require(native_cross >= native_in + 0.05,
              cell_name + ": cross-domain gap " +
                  format_double(100 * (native_cross - native_in)) +
                  " points < 5 (in " + format_double(100 * native_in) +
                  "%, cross " + format_double(100 * native_cross) + "%)");
      require(combined_cross < native_cross,
              cell_name + ": combined cross " +
                  format_double(100 * combined_cross) +
                  "% not below native cross " + format_double(100 * native_cross) +
                  "%");
      require(combined_in <= native_in + 0.10,
              cell_name + ": combined in-domain degraded by " +
                  format_double(100 * (combined_in - native_in)) + " points");

      // separability sanity on the default corpus: spoofs detectable but
      // not trivially so
      if (feature == FeatureKind::kCqcc) {
        require(native_in > 0.01, cell_name + ": in-domain EER " +
                                      format_double(100 * native_in) +
                                      "% <= 1%, attacks too easy");
        require(native_in < 0.15, cell_name + ": in-domain EER " +
                                      format_double(100 * native_in) +
                                      "% >= 15%, attacks too hard");
      }
    }
  }
}

// two full experiment runs at seed 42 produce byte-identical CSVs
void criterion_9() {
  ExperimentSettings s = default_acceptance_settings();
  const std::string out_a = "acceptance_c9_a", out_b = "acceptance_c9_b";
  fs::remove_all(out_a);
  fs::remove_all(out_b);
  const ExperimentGrid grid_a = run_experiment(s, "", out_a);
  run_experiment(s, "", out_b);
  // the default matrix: 2 experiments x 3 features x 3 classifiers
  require(grid_a.cells.size() == 18, "expected 18 grid rows, got " +
                                         std::to_string(grid_a.cells.size()));
  for (const CellResult &c : grid_a.cells)
    require(c.ok, std::string("cell exp") + std::to_string(c.experiment) + "/" +
                      to_string(c.feature) + "/" + to_string(c.classifier) +
                      " failed: " + c.error);
  require(read_file(out_a + "/results.csv") == read_file(out_b + "/results.csv"),
          "results.csv differ between runs");
  require(read_file(out_a + "/dev_results.csv") ==
              read_file(out_b + "/dev_results.csv"),
          "dev_results.csv differ between runs");
}

struct Criterion {
  int number;
  const char *name;
  std::function<void()> run;
};

}  // namespace

int main(int argc, char **argv) {
  const std::vector<Criterion> criteria = {
      {1, "beta constant", criterion_1},
      {2, "metric oracle equivalence", criterion_2},
      {3, "metric bounds and edge rows", criterion_3},
      {4, "EM monotonicity and K=1 closed form", criterion_4},
      {5, "GBDT gradient and loss checks", criterion_5},
      {6, "feature golden tests", criterion_6},
      {7, "protocol validation", criterion_7},
      {8, "domain-shift experiment", criterion_8},
      {9, "experiment determinism", criterion_9},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const Criterion &c : criteria) selected.push_back(c.number);

  int failures = 0;
  for (const Criterion &c : criteria) {
    if (std::find(selected.begin(), selected.end(), c.number) == selected.end())
      continue;
    try {
      c.run();
      std::printf("criterion %d (%s): PASS\n", c.number, c.name);
    } catch (const CheckFailure &f) {
      std::printf("criterion %d (%s): FAIL - %s\n", c.number, c.name,
                  f.what.c_str());
      ++failures;
    } catch (const std::exception &e) {
      std::printf("criterion %d (%s): FAIL - unexpected error: %s\n", c.number,
                  c.name, e.what());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
