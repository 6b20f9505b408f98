// core/src/gmm.cpp

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

#include "spoofcm/gmm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spoofcm/error.hpp"
#include "spoofcm/rng.hpp"

namespace spoofcm {

namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMatrix = Eigen::Map<const RowMatrix>;

constexpr double kRidgeScale = 1e-6;
constexpr double kWeightFloor = 1e-12;
constexpr double kLog2Pi = 1.8378770664093453;  // ln(2 pi)

std::size_t count_distinct_rows(const FrameSet &data) {
  std::vector<std::size_t> idx(data.rows);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto row_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(
        data.row(a), data.row(a) + data.dim, data.row(b), data.row(b) + data.dim);
  };
  std::sort(idx.begin(), idx.end(), row_less);
  std::size_t distinct = data.rows == 0 ? 0 : 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (row_less(idx[i - 1], idx[i])) ++distinct;
  return distinct;
}

double sq_dist(const double *a, const double *b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

std::vector<double> kmeans_init(const FrameSet &data, int k,
                                std::uint64_t seed) {
  if (k < 1) throw InvalidConfig("k must be >= 1");
  const std::size_t n = data.rows, d = data.dim;
  if (n < static_cast<std::size_t>(k) ||
      count_distinct_rows(data) < static_cast<std::size_t>(k))
    throw InsufficientData("need at least " + std::to_string(k) +
                           " distinct frames");

  Rng rng = Rng::stream(seed, "kmeans");
  std::vector<double> centroids(static_cast<std::size_t>(k) * d);

  // k-means++ seeding
  const std::size_t first = rng.below(n);
  std::copy(data.row(first), data.row(first) + d, centroids.begin());
  std::vector<double> d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < c; ++j)
        best = std::min(best, sq_dist(data.row(i), centroids.data() + j * d, d));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0) {
      const double target = rng.uniform() * total;
      double run = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        run += d2[i];
        if (run >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(n);
    }
    std::copy(data.row(pick), data.row(pick) + d,
              centroids.begin() + static_cast<std::size_t>(c) * d);
  }

  // Lloyd refinement
  std::vector<int> assign(n, 0);
  std::vector<double> next(centroids.size());
  std::vector<std::size_t> counts(k);
  for (int iter = 0; iter < 50; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double dist = sq_dist(data.row(i), centroids.data() + c * d, d);
        if (dist < best) {
          best = dist;
          best_c = c;
        }
      }
      assign[i] = best_c;
      d2[i] = best;
    }
    std::fill(next.begin(), next.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      double *dst = next.data() + static_cast<std::size_t>(assign[i]) * d;
      const double *src = data.row(i);
      for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
      counts[assign[i]]++;
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // re-seed an empty cluster to the globally farthest point
        const std::size_t far = static_cast<std::size_t>(
            std::max_element(d2.begin(), d2.end()) - d2.begin());
        std::copy(data.row(far), data.row(far) + d,
                  next.begin() + static_cast<std::size_t>(c) * d);
        d2[far] = 0.0;
      } else {
        double *dst = next.data() + static_cast<std::size_t>(c) * d;
        for (std::size_t j = 0; j < d; ++j) dst[j] /= counts[c];
      }
    }
    double movement = 0.0;
    for (int c = 0; c < k; ++c)
      movement = std::max(movement, std::sqrt(sq_dist(
                                        centroids.data() + c * d,
                                        next.data() + static_cast<std::size_t>(c) * d, d)));
    centroids.swap(next);
    if (movement < 1e-6) break;
  }
  return centroids;
}

void GmmModel::finalize() {
  const int k = num_components();
  const int d = dim;
  chol_lower.assign(static_cast<std::size_t>(k) * d * d, 0.0);
  log_gauss_norm.assign(k, 0.0);
  log_weights.assign(k, 0.0);
  for (int c = 0; c < k; ++c) {
    Eigen::Map<const RowMatrix> cov(
        covariances.data() + static_cast<std::size_t>(c) * d * d, d, d);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
      throw SingularCovariance("component " + std::to_string(c));
    const Eigen::MatrixXd lower = llt.matrixL();
    double log_det = 0.0;
    for (int i = 0; i < d; ++i) log_det += 2.0 * std::log(lower(i, i));
    Eigen::Map<RowMatrix>(chol_lower.data() + static_cast<std::size_t>(c) * d * d,
                          d, d) = lower;
    log_gauss_norm[c] = -0.5 * (d * kLog2Pi + log_det);
    log_weights[c] = std::log(std::max(weights[c], kWeightFloor));
  }
}

namespace {

// Per-component log densities for all frames at once:
// out.col(c) = log w_c + norm_c - 0.5 || L_c^-1 (x - mu_c) ||^2.
void component_log_probs(const FrameSet &data, const GmmModel &model,
                         Eigen::MatrixXd &out) {
  const std::size_t n = data.rows;
  const int d = model.dim;
  const int k = model.num_components();
  MapMatrix x(data.values.data(), static_cast<Eigen::Index>(n), d);
  out.resize(static_cast<Eigen::Index>(n), k);
  for (int c = 0; c < k; ++c) {
    Eigen::Map<const Eigen::VectorXd> mu(
        model.means.data() + static_cast<std::size_t>(c) * d, d);
    Eigen::Map<const RowMatrix> lower(
        model.chol_lower.data() + static_cast<std::size_t>(c) * d * d, d, d);
    Eigen::MatrixXd centered = (x.rowwise() - mu.transpose()).transpose();
    lower.triangularView<Eigen::Lower>().solveInPlace(centered);
    out.col(c) = (-0.5 * centered.colwise().squaredNorm().array() +
                  model.log_weights[c] + model.log_gauss_norm[c])
                     .transpose();
  }
}

// log-sum-exp across components, one value per frame
Eigen::VectorXd lse_rows(const Eigen::MatrixXd &logp) {
  Eigen::VectorXd max_row = logp.rowwise().maxCoeff();
  return max_row.array() +
         (logp.colwise() - max_row).array().exp().rowwise().sum().log();
}

void m_step(const FrameSet &data, const Eigen::MatrixXd &resp,
            GmmModel &model) {
  const std::size_t n = data.rows;
  const int d = model.dim;
  const int k = model.num_components();
  MapMatrix x(data.values.data(), static_cast<Eigen::Index>(n), d);

  Eigen::VectorXd nk = resp.colwise().sum();
  double weight_total = 0.0;
  for (int c = 0; c < k; ++c) {
    model.weights[c] =
        std::max(nk(c) / static_cast<double>(n), kWeightFloor);
    weight_total += model.weights[c];
  }
  for (int c = 0; c < k; ++c) model.weights[c] /= weight_total;

  for (int c = 0; c < k; ++c) {
    const double denom = std::max(nk(c), 1e-300);
    Eigen::VectorXd mu = (x.transpose() * resp.col(c)) / denom;
    Eigen::Map<Eigen::VectorXd>(model.means.data() + static_cast<std::size_t>(c) * d,
                                d) = mu;
    RowMatrix centered = x.rowwise() - mu.transpose();
    Eigen::MatrixXd cov =
        (centered.transpose() * resp.col(c).asDiagonal() * centered) / denom;
    const double ridge = kRidgeScale * cov.trace() / d;
    cov.diagonal().array() += ridge;
    Eigen::Map<RowMatrix>(model.covariances.data() +
                              static_cast<std::size_t>(c) * d * d,
                          d, d) = cov;
  }
  model.finalize();
}

}  // namespace

GmmFitResult gmm_fit_em(const FrameSet &data, const GmmFitOptions &opts) {
  const int k = opts.num_components;
  if (k < 1 || opts.max_iter < 1) throw InvalidConfig("bad GMM fit options");
  if (data.dim < 1) throw InvalidConfig("frame dim must be >= 1");
  if (data.rows < static_cast<std::size_t>(10 * k))
    throw InsufficientData("need at least " + std::to_string(10 * k) +
                           " frames for K=" + std::to_string(k));

  const std::size_t n = data.rows;
  const int d = static_cast<int>(data.dim);

  GmmFitResult result;
  GmmModel &model = result.model;
  model.dim = d;
  model.weights.assign(k, 1.0 / k);
  model.means = kmeans_init(data, k, opts.seed);
  model.covariances.assign(static_cast<std::size_t>(k) * d * d, 0.0);

  // Hard k-means assignments double as the initial responsibilities.
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), k);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (int c = 0; c < k; ++c) {
      const double dist =
          sq_dist(data.row(i), model.means.data() + static_cast<std::size_t>(c) * d,
                  data.dim);
      if (dist < best) {
        best = dist;
        best_c = c;
      }
    }
    resp(static_cast<Eigen::Index>(i), best_c) = 1.0;
  }
  m_step(data, resp, model);

  Eigen::MatrixXd logp;
  for (int iter = 0;; ++iter) {
    component_log_probs(data, model, logp);
    const Eigen::VectorXd ll = lse_rows(logp);
    const double mean_ll = ll.mean();
    result.ll_trace.push_back(mean_ll);
    result.iterations = static_cast<std::size_t>(iter);
    if (iter > 0 && mean_ll - result.ll_trace[iter - 1] < opts.convergence_tol) {
      result.converged = true;
      break;
    }
    if (iter == opts.max_iter) break;
    resp = ((logp.colwise() - ll).array().exp()).matrix();
    m_step(data, resp, model);
  }
  return result;
}

double gmm_log_likelihood(const GmmModel &model,
                          std::span<const double> frame) {
  if (static_cast<int>(frame.size()) != model.dim)
    throw DimensionMismatch("frame dim " + std::to_string(frame.size()) +
                            " vs model dim " + std::to_string(model.dim));
  if (!model.finalized())
    throw InvalidConfig("model not finalized");
  const int d = model.dim;
  const int k = model.num_components();
  Eigen::Map<const Eigen::VectorXd> x(frame.data(), d);
  double max_lp = -std::numeric_limits<double>::infinity();
  std::vector<double> lps(k);
  Eigen::VectorXd y(d);
  for (int c = 0; c < k; ++c) {
    Eigen::Map<const Eigen::VectorXd> mu(
        model.means.data() + static_cast<std::size_t>(c) * d, d);
    Eigen::Map<const RowMatrix> lower(
        model.chol_lower.data() + static_cast<std::size_t>(c) * d * d, d, d);
    y = x - mu;
    lower.triangularView<Eigen::Lower>().solveInPlace(y);
    lps[c] = model.log_weights[c] + model.log_gauss_norm[c] - 0.5 * y.squaredNorm();
    max_lp = std::max(max_lp, lps[c]);
  }
  double acc = 0.0;
  for (int c = 0; c < k; ++c) acc += std::exp(lps[c] - max_lp);
  return max_lp + std::log(acc);
}

double gmm_score_utterance(const GmmPairCm &cm, const FeatureMatrix &features) {
  if (features.num_frames == 0)
    throw EmptyFeatures("no frames in " + features.utt_id);
  if (cm.bonafide.dim != cm.spoof.dim)
    throw DimensionMismatch("bonafide/spoof model dims differ");
  if (static_cast<int>(features.dim) != cm.bonafide.dim)
    throw DimensionMismatch("feature dim " + std::to_string(features.dim) +
                            " vs model dim " + std::to_string(cm.bonafide.dim));
  double acc = 0.0;
  for (std::size_t t = 0; t < features.num_frames; ++t) {
    const std::span<const double> frame(features.frame(t), features.dim);
    acc += gmm_log_likelihood(cm.bonafide, frame) -
           gmm_log_likelihood(cm.spoof, frame);
  }
  return acc / static_cast<double>(features.num_frames);
}

}  // namespace spoofcm
