// core/src/gbdt.cpp

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

#include "spoofcm/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spoofcm/error.hpp"

namespace spoofcm {

const char *to_string(GbdtPreset preset) {
  return preset == GbdtPreset::kDepthwise ? "depthwise" : "symmetric";
}

PooledVector pool_features(const FeatureMatrix &features) {
  if (features.num_frames == 0)
    throw EmptyFeatures("cannot pool zero frames: " + features.utt_id);
  const std::size_t T = features.num_frames, D = features.dim;
  PooledVector out;
  out.utt_id = features.utt_id;
  out.values.assign(2 * D, 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t d = 0; d < D; ++d) out.values[d] += features.at(t, d);
  for (std::size_t d = 0; d < D; ++d) out.values[d] /= static_cast<double>(T);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t d = 0; d < D; ++d) {
      const double diff = features.at(t, d) - out.values[d];
      out.values[D + d] += diff * diff;
    }
  for (std::size_t d = 0; d < D; ++d)
    out.values[D + d] = std::sqrt(out.values[D + d] / static_cast<double>(T));
  return out;
}

double RegressionTree::predict(std::span<const double> x) const {
  if (nodes.empty()) return 0.0;
  int idx = 0;
  while (!nodes[idx].is_leaf())
    idx = x[static_cast<std::size_t>(nodes[idx].feature)] < nodes[idx].threshold
              ? nodes[idx].left
              : nodes[idx].right;
  return nodes[idx].leaf_value;
}

namespace {

double sigmoid(double f) {
  return f >= 0 ? 1.0 / (1.0 + std::exp(-f)) : std::exp(f) / (1.0 + std::exp(f));
}

// mean logistic loss; softplus(F) - y F, evaluated stably
double mean_logloss(const std::vector<double> &raw, const std::vector<int> &y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double f = raw[i];
    const double softplus = f > 0 ? f + std::log1p(std::exp(-f))
                                  : std::log1p(std::exp(f));
    acc += softplus - y[i] * f;
  }
  return acc / static_cast<double>(raw.size());
}

double split_gain(double gl, double hl, double gr, double hr, double lambda) {
  const double g = gl + gr, h = hl + hr;
  return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) -
                g * g / (h + lambda));
}

struct SplitChoice {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  bool valid() const { return feature >= 0; }
};

constexpr double kMinGain = 1e-12;

// Grows one tree over the active examples. Both presets share the level-wise
// sweep: for each feature, examples are visited in globally presorted order
// and bucketed into their current node, so per level each feature costs one
// pass over the data.
class TreeGrower {
 public:
  TreeGrower(const std::vector<double> &columns, std::size_t n, std::size_t dim,
             const std::vector<std::vector<std::uint32_t>> &sorted_idx,
             const std::vector<double> &grad, const std::vector<double> &hess,
             const GbdtParams &params)
      : columns_(columns),
        n_(n),
        dim_(dim),
        sorted_idx_(sorted_idx),
        grad_(grad),
        hess_(hess),
        params_(params) {}

  RegressionTree grow(std::vector<int> &node_of) {
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::fill(node_of.begin(), node_of.end(), 0);

    // per-node stats, indexed by node id and kept for the tree's lifetime
    std::vector<int> level_nodes{0};
    node_g_.assign(1, 0.0);
    node_h_.assign(1, 0.0);
    node_count_.assign(1, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      node_g_[0] += grad_[i];
      node_h_[0] += hess_[i];
      node_count_[0]++;
    }

    for (int depth = 0; depth < params_.max_depth && !level_nodes.empty();
         ++depth) {
      std::vector<SplitChoice> choices =
          params_.preset == GbdtPreset::kDepthwise
              ? best_depthwise(level_nodes, node_of)
              : best_symmetric(level_nodes, node_of);

      std::vector<int> next_level;
      bool any_split = false;
      for (std::size_t li = 0; li < level_nodes.size(); ++li) {
        const int node = level_nodes[li];
        const SplitChoice &c = choices[li];
        if (!c.valid() || c.gain <= kMinGain) continue;
        any_split = true;
        TreeNode &tn = tree.nodes[static_cast<std::size_t>(node)];
        tn.feature = c.feature;
        tn.threshold = c.threshold;
        tn.left = static_cast<int>(tree.nodes.size());
        tn.right = tn.left + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        next_level.push_back(tn.left);
        next_level.push_back(tn.right);
      }
      if (!any_split) break;

      // route examples into the new children and accumulate their stats
      node_g_.resize(tree.nodes.size(), 0.0);
      node_h_.resize(tree.nodes.size(), 0.0);
      node_count_.resize(tree.nodes.size(), 0);
      for (std::size_t i = 0; i < n_; ++i) {
        const TreeNode &tn = tree.nodes[static_cast<std::size_t>(node_of[i])];
        if (tn.is_leaf()) continue;
        const int child =
            value(i, tn.feature) < tn.threshold ? tn.left : tn.right;
        node_of[i] = child;
        node_g_[static_cast<std::size_t>(child)] += grad_[i];
        node_h_[static_cast<std::size_t>(child)] += hess_[i];
        node_count_[static_cast<std::size_t>(child)]++;
      }
      level_nodes.swap(next_level);
    }

    for (std::size_t node = 0; node < tree.nodes.size(); ++node) {
      TreeNode &tn = tree.nodes[node];
      if (tn.is_leaf() && node_count_[node] > 0)
        tn.leaf_value = -node_g_[node] / (node_h_[node] + params_.lambda);
    }
    return tree;
  }

 private:
  double value(std::size_t i, int feature) const {
    return columns_[static_cast<std::size_t>(feature) * n_ + i];
  }

  // One pass per feature; per-node running left-hand sums. Candidates are
  // evaluated at boundaries between distinct values within a node.
  std::vector<SplitChoice> best_depthwise(const std::vector<int> &level_nodes,
                                          const std::vector<int> &node_of) {
    std::vector<int> level_index(node_g_.size(), -1);
    for (std::size_t li = 0; li < level_nodes.size(); ++li)
      level_index[static_cast<std::size_t>(level_nodes[li])] =
          static_cast<int>(li);
    const std::size_t L = level_nodes.size();
    std::vector<SplitChoice> best(L);

    std::vector<double> gl(L), hl(L), prev_val(L);
    std::vector<std::size_t> cnt_l(L);
    for (int f = 0; f < static_cast<int>(dim_); ++f) {
      std::fill(gl.begin(), gl.end(), 0.0);
      std::fill(hl.begin(), hl.end(), 0.0);
      std::fill(cnt_l.begin(), cnt_l.end(), 0);
      std::vector<bool> seen(L, false);
      for (const std::uint32_t i : sorted_idx_[static_cast<std::size_t>(f)]) {
        const int node = node_of[i];
        const int li = level_index[static_cast<std::size_t>(node)];
        if (li < 0) continue;
        const std::size_t u = static_cast<std::size_t>(li);
        const double v = value(i, f);
        if (seen[u] && v > prev_val[u] && cnt_l[u] > 0 &&
            cnt_l[u] < node_count_[static_cast<std::size_t>(node)]) {
          const double gain =
              split_gain(gl[u], hl[u],
                         node_g_[static_cast<std::size_t>(node)] - gl[u],
                         node_h_[static_cast<std::size_t>(node)] - hl[u],
                         params_.lambda);
          // strict improvement keeps the lowest feature/threshold on ties
          if (gain > best[u].gain + kMinGain) {
            best[u].gain = gain;
            best[u].feature = f;
            best[u].threshold = 0.5 * (prev_val[u] + v);
          }
        }
        gl[u] += grad_[i];
        hl[u] += hess_[i];
        cnt_l[u]++;
        prev_val[u] = v;
        seen[u] = true;
      }
    }
    return best;
  }

  // One shared (feature, threshold) for the whole level, maximizing the sum
  // of per-node gains (oblivious-tree growth).
  std::vector<SplitChoice> best_symmetric(const std::vector<int> &level_nodes,
                                          const std::vector<int> &node_of) {
    std::vector<int> level_index(node_g_.size(), -1);
    for (std::size_t li = 0; li < level_nodes.size(); ++li)
      level_index[static_cast<std::size_t>(level_nodes[li])] =
          static_cast<int>(li);
    const std::size_t L = level_nodes.size();
    SplitChoice best;

    std::vector<double> gl(L), hl(L);
    for (int f = 0; f < static_cast<int>(dim_); ++f) {
      std::fill(gl.begin(), gl.end(), 0.0);
      std::fill(hl.begin(), hl.end(), 0.0);
      bool have_prev = false;
      double prev_val = 0.0;
      std::size_t passed = 0;
      for (const std::uint32_t i : sorted_idx_[static_cast<std::size_t>(f)]) {
        const int node = node_of[i];
        const int li = level_index[static_cast<std::size_t>(node)];
        if (li < 0) continue;
        const double v = value(i, f);
        if (have_prev && v > prev_val && passed > 0) {
          double total = 0.0;
          for (std::size_t u = 0; u < L; ++u) {
            const std::size_t node_u =
                static_cast<std::size_t>(level_nodes[u]);
            total += split_gain(gl[u], hl[u], node_g_[node_u] - gl[u],
                                node_h_[node_u] - hl[u], params_.lambda);
          }
          if (total > best.gain + kMinGain) {
            best.gain = total;
            best.feature = f;
            best.threshold = 0.5 * (prev_val + v);
          }
        }
        gl[static_cast<std::size_t>(li)] += grad_[i];
        hl[static_cast<std::size_t>(li)] += hess_[i];
        ++passed;
        prev_val = v;
        have_prev = true;
      }
    }
    return std::vector<SplitChoice>(L, best);
  }

  const std::vector<double> &columns_;
  const std::size_t n_;
  const std::size_t dim_;
  const std::vector<std::vector<std::uint32_t>> &sorted_idx_;
  const std::vector<double> &grad_;
  const std::vector<double> &hess_;
  const GbdtParams &params_;

  std::vector<double> node_g_, node_h_;
  std::vector<std::size_t> node_count_;
};

}  // namespace

GbdtFitResult gbdt_fit(const std::vector<PooledVector> &examples,
                       const std::vector<int> &labels, const GbdtParams &params,
                       const BoostObserver &observer) {
  const std::size_t n = examples.size();
  if (n != labels.size()) throw InvalidConfig("examples/labels size mismatch");
  if (n < 10) throw InsufficientData("need at least 10 examples");
  if (params.num_trees < 0 || params.max_depth < 1 || params.learning_rate <= 0)
    throw InvalidConfig("bad boosting params");

  const std::size_t dim = examples[0].values.size();
  for (const PooledVector &e : examples)
    if (e.values.size() != dim)
      throw DimensionMismatch("inconsistent pooled dims");

  std::size_t positives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw InvalidConfig("labels must be 0 or 1");
    positives += static_cast<std::size_t>(y);
  }
  if (positives == 0 || positives == n)
    throw SingleClass("training labels are all " +
                      std::string(positives ? "bonafide" : "spoof"));

  // column-major copy + per-feature presorted order (stable: ties by index)
  std::vector<double> columns(dim * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < dim; ++f)
      columns[f * n + i] = examples[i].values[f];
  std::vector<std::vector<std::uint32_t>> sorted_idx(dim);
  for (std::size_t f = 0; f < dim; ++f) {
    sorted_idx[f].resize(n);
    std::iota(sorted_idx[f].begin(), sorted_idx[f].end(), 0u);
    const double *col = columns.data() + f * n;
    std::stable_sort(sorted_idx[f].begin(), sorted_idx[f].end(),
                     [col](std::uint32_t a, std::uint32_t b) {
                       return col[a] < col[b];
                     });
  }

  GbdtFitResult result;
  GbdtModel &model = result.model;
  model.learning_rate = params.learning_rate;
  model.preset = params.preset;
  model.dim = dim;
  const double prior = static_cast<double>(positives) / static_cast<double>(n);
  model.base_score = std::log(prior / (1.0 - prior));

  std::vector<double> raw(n, model.base_score);
  std::vector<double> grad(n), hess(n);
  std::vector<int> node_of(n);

  for (int round = 0; round < params.num_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(raw[i]);
      grad[i] = p - labels[i];
      hess[i] = p * (1.0 - p);
    }
    TreeGrower grower(columns, n, dim, sorted_idx, grad, hess, params);
    std::vector<double> raw_before;
    if (observer) raw_before = raw;

    RegressionTree tree = grower.grow(node_of);
    for (std::size_t i = 0; i < n; ++i)
      raw[i] += params.learning_rate *
                tree.nodes[static_cast<std::size_t>(node_of[i])].leaf_value;
    model.trees.push_back(std::move(tree));
    result.logloss_trace.push_back(mean_logloss(raw, labels));

    if (observer) {
      BoostRound info;
      info.round = round;
      info.raw_scores = std::move(raw_before);
      info.gradients = grad;
      info.hessians = hess;
      info.train_logloss = result.logloss_trace.back();
      observer(info);
    }
  }
  return result;
}

double gbdt_score(const GbdtModel &model, const PooledVector &x) {
  if (x.values.size() != model.dim)
    throw DimensionMismatch("pooled dim " + std::to_string(x.values.size()) +
                            " vs model dim " + std::to_string(model.dim));
  double acc = 0.0;
  for (const RegressionTree &tree : model.trees) acc += tree.predict(x.values);
  return model.base_score + model.learning_rate * acc;
}

}  // namespace spoofcm
