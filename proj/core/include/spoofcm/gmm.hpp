// core/include/spoofcm/gmm.hpp

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

#ifndef SPOOFCM_GMM_HPP_
#define SPOOFCM_GMM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "spoofcm/features.hpp"

namespace spoofcm {

/// Row-major set of training frames (rows x dim).
struct FrameSet {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t dim = 0;

  const double *row(std::size_t i) const { return values.data() + i * dim; }
  void append(std::span<const double> frame) {
    values.insert(values.end(), frame.begin(), frame.end());
    ++rows;
  }
};

/// Full-covariance Gaussian mixture. After fitting or loading, finalize()
/// caches the Cholesky factors used for likelihood evaluation.
struct GmmModel {
  int dim = 0;
  std::vector<double> weights;      // K
  std::vector<double> means;        // K x D, row-major
  std::vector<double> covariances;  // K x D x D, row-major

  int num_components() const { return static_cast<int>(weights.size()); }

  /// Rebuilds the scoring tables. Throws SingularCovariance if any
  /// component covariance fails its Cholesky factorization.
  void finalize();
  bool finalized() const { return !chol_lower.empty(); }

  // derived, not serialized
  std::vector<double> chol_lower;      // K x D x D lower factors
  std::vector<double> log_gauss_norm;  // K: -(D/2)ln(2pi) - 0.5 log|Sigma|
  std::vector<double> log_weights;     // K
};

/// The bonafide/spoof model pair; scores are log-likelihood ratios.
struct GmmPairCm {
  GmmModel bonafide;
  GmmModel spoof;
  std::uint64_t feature_config_hash = 0;
};

/// k-means++ seeding followed by Lloyd iterations (at most 50, stopping when
/// no centroid moves more than 1e-6). Empty clusters are re-seeded to the
/// point farthest from its centroid. Returns K x dim centroids, row-major.
/// Throws InsufficientData when the set holds fewer than K distinct frames.
std::vector<double> kmeans_init(const FrameSet &data, int k,
                                std::uint64_t seed);

struct GmmFitOptions {
  int num_components = 2;
  int max_iter = 100;
  std::uint64_t seed = 42;
  double convergence_tol = 1e-5;  // mean per-frame log-likelihood gain
};

struct GmmFitResult {
  GmmModel model;
  std::vector<double> ll_trace;  // mean per-frame log-likelihood per iteration
  std::size_t iterations = 0;
  bool converged = false;
};

/// EM from the k-means initialization. Each M-step adds a ridge of
/// 1e-6 * trace / dim to every covariance before factorizing.
/// Throws InsufficientData (fewer than 10 K frames) or SingularCovariance.
GmmFitResult gmm_fit_em(const FrameSet &data, const GmmFitOptions &opts);

/// log sum_k w_k N(frame; mu_k, Sigma_k), evaluated with log-sum-exp.
double gmm_log_likelihood(const GmmModel &model, std::span<const double> frame);

/// Mean per-frame log-likelihood ratio (bonafide minus spoof);
/// higher means more bonafide-like.
double gmm_score_utterance(const GmmPairCm &cm, const FeatureMatrix &features);

}  // namespace spoofcm

#endif  // SPOOFCM_GMM_HPP_
