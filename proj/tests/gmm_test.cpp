// tests/gmm_test.cpp

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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "spoofcm/error.hpp"
#include "spoofcm/gmm.hpp"
#include "spoofcm/model_io.hpp"
#include "spoofcm/rng.hpp"
#include "test_util.hpp"

using namespace spoofcm;

namespace {

FrameSet make_set(const std::vector<std::vector<double>> &rows) {
  FrameSet s;
  s.dim = rows.empty() ? 0 : rows[0].size();
  for (const auto &r : rows) s.append(r);
  return s;
}

FrameSet gaussian_blob(Rng &rng, std::size_t n, const std::vector<double> &mean,
                       double stddev) {
  FrameSet s;
  s.dim = mean.size();
  std::vector<double> row(mean.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < mean.size(); ++d)
      row[d] = mean[d] + stddev * rng.normal();
    s.append(row);
  }
  return s;
}

// direct mixture density without log-sum-exp, for the likelihood oracle
double oracle_loglik(const GmmModel &m, const std::vector<double> &x) {
  double total = 0.0;
  const int d = m.dim;
  for (int c = 0; c < m.num_components(); ++c) {
    // determinant and inverse via Gauss-Jordan on a copy of the covariance
    std::vector<double> a(m.covariances.begin() + c * d * d,
                          m.covariances.begin() + (c + 1) * d * d);
    std::vector<double> inv(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) inv[i * d + i] = 1.0;
    double det = 1.0;
    for (int col = 0; col < d; ++col) {
      const double pivot = a[col * d + col];
      det *= pivot;
      for (int j = 0; j < d; ++j) {
        a[col * d + j] /= pivot;
        inv[col * d + j] /= pivot;
      }
      for (int row = 0; row < d; ++row) {
        if (row == col) continue;
        const double f = a[row * d + col];
        for (int j = 0; j < d; ++j) {
          a[row * d + j] -= f * a[col * d + j];
          inv[row * d + j] -= f * inv[col * d + j];
        }
      }
    }
    double quad = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        quad += (x[i] - m.means[c * d + i]) * inv[i * d + j] *
                (x[j] - m.means[c * d + j]);
    total += m.weights[c] *
             std::exp(-0.5 * quad) /
             std::sqrt(std::pow(2.0 * std::numbers::pi, d) * det);
  }
  return std::log(total);
}

}  // namespace

TEST_SUITE("gmm") {

TEST_CASE("kmeans recovers two separated 1-D clusters") {
  Rng rng(1);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({0.0 + 0.01 * rng.uniform(-1.0, 1.0)});
  for (int i = 0; i < 10; ++i) rows.push_back({10.0 + 0.01 * rng.uniform(-1.0, 1.0)});
  const FrameSet data = make_set(rows);

  // exhaustive oracle over the 19 contiguous splits of the sorted points
  std::vector<double> sorted;
  for (const auto &r : rows) sorted.push_back(r[0]);
  std::sort(sorted.begin(), sorted.end());
  double best_obj = 1e300, best_lo = 0, best_hi = 0;
  for (std::size_t cut = 1; cut < sorted.size(); ++cut) {
    double m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < cut; ++i) m1 += sorted[i] / cut;
    for (std::size_t i = cut; i < sorted.size(); ++i)
      m2 += sorted[i] / (sorted.size() - cut);
    double obj = 0;
    for (std::size_t i = 0; i < cut; ++i) obj += (sorted[i] - m1) * (sorted[i] - m1);
    for (std::size_t i = cut; i < sorted.size(); ++i)
      obj += (sorted[i] - m2) * (sorted[i] - m2);
    if (obj < best_obj) {
      best_obj = obj;
      best_lo = m1;
      best_hi = m2;
    }
  }

  const std::vector<double> centroids = kmeans_init(data, 2, 42);
  const double lo = std::min(centroids[0], centroids[1]);
  const double hi = std::max(centroids[0], centroids[1]);
  CHECK(std::abs(lo - best_lo) < 0.05);
  CHECK(std::abs(hi - best_hi) < 0.05);
  CHECK(std::abs(lo - 0.0) < 0.05);
  CHECK(std::abs(hi - 10.0) < 0.05);
}

TEST_CASE("kmeans with one cluster returns the mean") {
  Rng rng(2);
  const FrameSet data = gaussian_blob(rng, 50, {3.0, -1.0}, 0.5);
  const std::vector<double> c = kmeans_init(data, 1, 7);
  double m0 = 0, m1 = 0;
  for (std::size_t i = 0; i < data.rows; ++i) {
    m0 += data.row(i)[0] / data.rows;
    m1 += data.row(i)[1] / data.rows;
  }
  CHECK(c[0] == doctest::Approx(m0).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(m1).epsilon(1e-12));
}

TEST_CASE("kmeans is deterministic for a fixed seed") {
  Rng rng(3);
  const FrameSet data = gaussian_blob(rng, 100, {0.0, 0.0, 0.0}, 2.0);
  const auto a = kmeans_init(data, 3, 42);
  const auto b = kmeans_init(data, 3, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("kmeans requires K distinct frames") {
  const FrameSet data = make_set({{1.0}, {1.0}, {1.0}, {2.0}});
  CHECK_THROWS_AS(kmeans_init(data, 3, 1), InsufficientData);
}

TEST_CASE("K=1 EM is the ridged closed form") {
  Rng rng(4);
  const FrameSet data = gaussian_blob(rng, 200, {1.5, -2.0, 0.25}, 1.2);
  GmmFitOptions opts;
  opts.num_components = 1;
  const GmmFitResult fit = gmm_fit_em(data, opts);

  const std::size_t n = data.rows, d = data.dim;
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += data.row(i)[j] / n;
  std::vector<double> cov(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        cov[a * d + b] += (data.row(i)[a] - mean[a]) * (data.row(i)[b] - mean[b]) / n;
  double trace = 0.0;
  for (std::size_t a = 0; a < d; ++a) trace += cov[a * d + a];
  for (std::size_t a = 0; a < d; ++a) cov[a * d + a] += 1e-6 * trace / d;

  CHECK(fit.model.weights[0] == 1.0);
  for (std::size_t j = 0; j < d; ++j)
    CHECK(fit.model.means[j] == doctest::Approx(mean[j]).epsilon(1e-10));
  for (std::size_t j = 0; j < d * d; ++j)
    CHECK(fit.model.covariances[j] == doctest::Approx(cov[j]).epsilon(1e-10));
}

TEST_CASE("1-D two-point data lands at the unit Gaussian") {
  // data {-1, +1} repeated to satisfy the 10K minimum
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({i % 2 ? 1.0 : -1.0});
  GmmFitOptions opts;
  opts.num_components = 1;
  const GmmFitResult fit = gmm_fit_em(make_set(rows), opts);
  CHECK(fit.model.means[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.model.covariances[0] == doctest::Approx(1.0).epsilon(1e-5));
  const double ll = gmm_log_likelihood(fit.model, std::vector<double>{1.0});
  CHECK(ll == doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi) - 0.5)
                  .epsilon(1e-6));
}

TEST_CASE("K=2 recovers two separated synthetic clusters") {
  Rng rng(5);
  FrameSet data = gaussian_blob(rng, 300, {0.0, 0.0}, 1.0);
  const FrameSet second = gaussian_blob(rng, 300, {8.0, -6.0}, 1.0);
  for (std::size_t i = 0; i < second.rows; ++i) data.append({second.row(i), second.dim});

  GmmFitOptions opts;
  opts.num_components = 2;
  const GmmFitResult fit = gmm_fit_em(data, opts);
  // 3 standard errors of the generating means: 3 * 1/sqrt(300)
  const double tol = 3.0 / std::sqrt(300.0);
  const bool first_is_origin = std::abs(fit.model.means[0]) < 4.0;
  const std::size_t origin = first_is_origin ? 0 : 1;
  const std::size_t far = 1 - origin;
  CHECK(std::abs(fit.model.means[origin * 2 + 0] - 0.0) < tol);
  CHECK(std::abs(fit.model.means[origin * 2 + 1] - 0.0) < tol);
  CHECK(std::abs(fit.model.means[far * 2 + 0] - 8.0) < tol);
  CHECK(std::abs(fit.model.means[far * 2 + 1] + 6.0) < tol);
  CHECK(fit.model.weights[0] == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("EM log-likelihood never decreases") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    FrameSet data = gaussian_blob(rng, 150, {rng.normal(), rng.normal()}, 1.0);
    const FrameSet extra =
        gaussian_blob(rng, 150, {rng.normal() + 4.0, rng.normal()}, 0.7);
    for (std::size_t i = 0; i < extra.rows; ++i) data.append({extra.row(i), extra.dim});
    GmmFitOptions opts;
    opts.num_components = 2;
    opts.seed = 42 + trial;
    const GmmFitResult fit = gmm_fit_em(data, opts);
    REQUIRE(fit.ll_trace.size() >= 2);
    for (std::size_t i = 1; i < fit.ll_trace.size(); ++i)
      CHECK(fit.ll_trace[i] >= fit.ll_trace[i - 1] - 1e-8);
  }
}

TEST_CASE("insufficient data for EM") {
  const FrameSet data = make_set({{0.0}, {1.0}, {2.0}});
  GmmFitOptions opts;
  opts.num_components = 1;
  CHECK_THROWS_AS(gmm_fit_em(data, opts), InsufficientData);
}

TEST_CASE("log-likelihood closed form at the mode") {
  GmmModel m;
  m.dim = 3;
  m.weights = {1.0};
  m.means = {0.0, 0.0, 0.0};
  m.covariances = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  m.finalize();
  const double ll = gmm_log_likelihood(m, std::vector<double>{0.0, 0.0, 0.0});
  CHECK(ll == doctest::Approx(-1.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("equal-weight symmetric pair averages the densities") {
  GmmModel m;
  m.dim = 1;
  m.weights = {0.5, 0.5};
  m.means = {-2.0, 2.0};
  m.covariances = {1.0, 1.0};
  m.finalize();
  // frame at 0 is equidistant: log of the average of two N(+-2, 1) densities
  const double one = std::exp(-2.0) / std::sqrt(2.0 * std::numbers::pi);
  CHECK(gmm_log_likelihood(m, std::vector<double>{0.0}) ==
        doctest::Approx(std::log(one)).epsilon(1e-12));
}

TEST_CASE("log-likelihood matches direct summation on random 3-D models") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    GmmModel m;
    m.dim = 3;
    m.weights = {0.3, 0.7};
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 3; ++d) m.means.push_back(rng.normal());
    for (int c = 0; c < 2; ++c) {
      // random SPD: A A^T + I
      double a[3][3];
      for (auto &row : a)
        for (double &v : row) v = 0.4 * rng.normal();
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double v = i == j ? 1.0 : 0.0;
          for (int k = 0; k < 3; ++k) v += a[i][k] * a[j][k];
          m.covariances.push_back(v);
        }
    }
    m.finalize();
    const std::vector<double> x{rng.normal(), rng.normal(), rng.normal()};
    CHECK(gmm_log_likelihood(m, x) == doctest::Approx(oracle_loglik(m, x)).epsilon(1e-10));
  }
}

TEST_CASE("1-D densities integrate to one") {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    GmmModel m;
    m.dim = 1;
    m.weights = {0.4, 0.6};
    m.means = {rng.normal(), rng.normal() + 3.0};
    m.covariances = {0.5 + rng.uniform(), 0.5 + rng.uniform()};
    m.finalize();
    // trapezoid quadrature over +-10 sigma around the outermost means
    const double sigma = std::sqrt(std::max(m.covariances[0], m.covariances[1]));
    const double lo = std::min(m.means[0], m.means[1]) - 10.0 * sigma;
    const double hi = std::max(m.means[0], m.means[1]) + 10.0 * sigma;
    const int steps = 20000;
    double integral = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double x = lo + (hi - lo) * i / steps;
      const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
      integral += w * std::exp(gmm_log_likelihood(m, std::vector<double>{x}));
    }
    integral *= (hi - lo) / steps;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("utterance scoring: symmetry, T=1, and sampling direction") {
  Rng rng(9);
  const FrameSet bona_data = gaussian_blob(rng, 400, {2.0, 2.0}, 1.0);
  const FrameSet spoof_data = gaussian_blob(rng, 400, {-2.0, -2.0}, 1.0);
  GmmFitOptions opts;
  opts.num_components = 1;
  GmmPairCm cm;
  cm.bonafide = gmm_fit_em(bona_data, opts).model;
  cm.spoof = gmm_fit_em(spoof_data, opts).model;

  // identical models score exactly zero
  GmmPairCm same;
  same.bonafide = cm.bonafide;
  same.spoof = cm.bonafide;
  FeatureMatrix utt;
  utt.num_frames = 5;
  utt.dim = 2;
  for (int i = 0; i < 10; ++i) utt.values.push_back(rng.normal());
  CHECK(gmm_score_utterance(same, utt) == 0.0);

  // single frame equals that frame's LLR
  FeatureMatrix one;
  one.num_frames = 1;
  one.dim = 2;
  one.values = {1.0, -0.5};
  const double llr =
      gmm_log_likelihood(cm.bonafide, std::span<const double>(one.values)) -
      gmm_log_likelihood(cm.spoof, std::span<const double>(one.values));
  CHECK(gmm_score_utterance(cm, one) == llr);

  // label-flip antisymmetry
  GmmPairCm flipped;
  flipped.bonafide = cm.spoof;
  flipped.spoof = cm.bonafide;
  CHECK(gmm_score_utterance(flipped, one) == -llr);

  // utterances drawn from the bonafide model score positive on average
  double mean_score = 0.0;
  for (int u = 0; u < 100; ++u) {
    FeatureMatrix f;
    f.num_frames = 20;
    f.dim = 2;
    for (int i = 0; i < 40; ++i) f.values.push_back(2.0 + rng.normal());
    mean_score += gmm_score_utterance(cm, f) / 100.0;
  }
  CHECK(mean_score > 0.0);
}

TEST_CASE("dimension and emptiness guards") {
  GmmModel m;
  m.dim = 2;
  m.weights = {1.0};
  m.means = {0.0, 0.0};
  m.covariances = {1, 0, 0, 1};
  m.finalize();
  CHECK_THROWS_AS(gmm_log_likelihood(m, std::vector<double>{1.0}), DimensionMismatch);

  GmmPairCm cm;
  cm.bonafide = m;
  cm.spoof = m;
  FeatureMatrix empty;
  empty.dim = 2;
  CHECK_THROWS_AS(gmm_score_utterance(cm, empty), EmptyFeatures);
}

TEST_CASE("gmm pair model files round-trip bitwise on scores") {
  test::TempDir dir("gmm_io");
  Rng rng(11);
  GmmFitOptions opts;
  opts.num_components = 2;
  GmmPairCm cm;
  cm.bonafide = gmm_fit_em(gaussian_blob(rng, 200, {1.0, 1.0}, 1.0), opts).model;
  cm.spoof = gmm_fit_em(gaussian_blob(rng, 200, {-1.0, -1.0}, 1.0), opts).model;
  cm.feature_config_hash = 7;
  save_model(dir.file("pair.spcm"), cm);

  const CmModel back = load_model(dir.file("pair.spcm"));
  REQUIRE(model_kind(back) == ModelKind::kGmmPair);
  const GmmPairCm &loaded = std::get<GmmPairCm>(back);
  FeatureMatrix utt;
  utt.num_frames = 25;
  utt.dim = 2;
  for (int i = 0; i < 50; ++i) utt.values.push_back(rng.normal());
  CHECK(gmm_score_utterance(loaded, utt) == gmm_score_utterance(cm, utt));
}

TEST_CASE("fixed seed gives identical models") {
  Rng rng(10);
  FrameSet data = gaussian_blob(rng, 200, {0.0, 1.0}, 1.5);
  GmmFitOptions opts;
  opts.num_components = 2;
  opts.seed = 42;
  const GmmFitResult a = gmm_fit_em(data, opts);
  const GmmFitResult b = gmm_fit_em(data, opts);
  REQUIRE(a.model.means.size() == b.model.means.size());
  for (std::size_t i = 0; i < a.model.means.size(); ++i)
    CHECK(a.model.means[i] == b.model.means[i]);
  for (std::size_t i = 0; i < a.model.covariances.size(); ++i)
    CHECK(a.model.covariances[i] == b.model.covariances[i]);
}

}  // TEST_SUITE
