// core/include/spoofcm/gbdt.hpp

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

#ifndef SPOOFCM_GBDT_HPP_
#define SPOOFCM_GBDT_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spoofcm/features.hpp"

namespace spoofcm {

/// Fixed-length utterance embedding for the tree classifiers:
/// per-coefficient mean followed by per-coefficient population standard
/// deviation over frames, so dim = 2 * feature dim.
struct PooledVector {
  std::vector<double> values;
  std::string utt_id;
};

/// Throws EmptyFeatures on a zero-frame matrix.
PooledVector pool_features(const FeatureMatrix &features);

/// Tree growth strategies standing in for the two boosted-tree families:
/// depthwise grows every node independently (XGBoost-style exact greedy),
/// symmetric picks one shared (feature, threshold) per level (CatBoost-style
/// oblivious trees).
enum class GbdtPreset { kDepthwise, kSymmetric };

const char *to_string(GbdtPreset preset);

struct TreeNode {
  int feature = -1;        // split feature, -1 for leaves
  double threshold = 0.0;  // go left when x[feature] < threshold
  int left = -1;
  int right = -1;
  double leaf_value = 0.0;

  bool is_leaf() const { return left < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  double predict(std::span<const double> x) const;
};

struct GbdtModel {
  std::vector<RegressionTree> trees;
  double learning_rate = 0.1;
  double base_score = 0.0;  // log-odds of the training prior
  GbdtPreset preset = GbdtPreset::kDepthwise;
  std::uint64_t feature_config_hash = 0;
  std::size_t dim = 0;
};

struct GbdtParams {
  int num_trees = 100;
  int max_depth = 6;
  double learning_rate = 0.1;
  double lambda = 1.0;  // L2 on leaf values
  GbdtPreset preset = GbdtPreset::kDepthwise;
  std::uint64_t seed = 42;  // kept for interface parity; training is exact
};

/// Per-round snapshot for diagnostics: raw scores and logistic
/// gradients/hessians the round was fitted on, and the mean training
/// log-loss after applying it.
struct BoostRound {
  int round = 0;
  std::vector<double> raw_scores;
  std::vector<double> gradients;
  std::vector<double> hessians;
  double train_logloss = 0.0;
};
using BoostObserver = std::function<void(const BoostRound &)>;

struct GbdtFitResult {
  GbdtModel model;
  std::vector<double> logloss_trace;  // mean log-loss after each round
};

/// Additive logistic-loss boosting. Labels are 1 = bonafide, 0 = spoof.
/// Leaf values are -G / (H + lambda); splits maximize
/// (G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l)) / 2 over exact midpoints
/// between sorted distinct feature values, ties resolved to the lowest
/// feature index then the lowest threshold.
/// Throws SingleClass or InsufficientData (fewer than 10 examples).
GbdtFitResult gbdt_fit(const std::vector<PooledVector> &examples,
                       const std::vector<int> &labels, const GbdtParams &params,
                       const BoostObserver &observer = nullptr);

/// base_score + learning_rate * sum of tree outputs (raw log-odds; higher
/// means more bonafide-like). Throws DimensionMismatch.
double gbdt_score(const GbdtModel &model, const PooledVector &x);

}  // namespace spoofcm

#endif  // SPOOFCM_GBDT_HPP_
