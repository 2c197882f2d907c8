// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include <algorithm>
#include <cmath>

#include "crslearn/digest.hpp"
#include "crslearn/error.hpp"
#include "crslearn/learn.hpp"
#include "crslearn/parallel.hpp"
#include "crslearn/rng.hpp"

namespace crslearn::learn {

namespace {

struct TreeBuilder {
  const features::FeatureMatrix& X;
  const std::vector<int>& y01;
  std::size_t n_candidates;
  Rng& rng;
  Tree tree;

  double gini(double pos, double total) const {
    if (total == 0) return 0.0;
    double p = pos / total;
    return 2.0 * p * (1.0 - p);
  }

  // Best split over the candidate features; falls back to the remaining
  // features when every sampled one is constant within the node, so a
  // mixed node only becomes a leaf if it is genuinely unsplittable.
  int choose_split(const std::vector<std::size_t>& idx, double pos) {
    const std::size_t d = X.cols;
    std::vector<std::size_t> order(d);
    for (std::size_t j = 0; j < d; ++j) order[j] = j;
    for (std::size_t j = 0; j < n_candidates && j + 1 < d; ++j) {
      std::size_t k = j + static_cast<std::size_t>(rng.below(d - j));
      std::swap(order[j], order[k]);
    }
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(
                                                 std::min(n_candidates, d)));

    const double total = static_cast<double>(idx.size());
    const double parent = gini(pos, total);
    int best_feature = -1;
    double best_gain = 1e-12;
    auto consider = [&](std::size_t f) {
      double right_pos = 0, right_total = 0;
      for (std::size_t i : idx) {
        if (X.row(i)[f]) {
          right_total += 1;
          right_pos += static_cast<double>(y01[i]);
        }
      }
      double left_total = total - right_total;
      if (right_total == 0 || left_total == 0) return;
      double left_pos = pos - right_pos;
      double gain = parent - (left_total / total) * gini(left_pos, left_total) -
                    (right_total / total) * gini(right_pos, right_total);
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = static_cast<int>(f);
      }
    };
    for (std::size_t j = 0; j < std::min(n_candidates, d); ++j) consider(order[j]);
    if (best_feature < 0) {
      for (std::size_t f = 0; f < d; ++f) consider(f);
    }
    return best_feature;
  }

  int build(std::vector<std::size_t>&& idx) {
    double pos = 0;
    for (std::size_t i : idx) pos += static_cast<double>(y01[i]);
    const double total = static_cast<double>(idx.size());

    int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (pos == 0 || pos == total) {
      tree.nodes[static_cast<std::size_t>(node_id)].p1 = pos == 0 ? 0.0 : 1.0;
      return node_id;
    }
    int feature = choose_split(idx, pos);
    if (feature < 0) {
      tree.nodes[static_cast<std::size_t>(node_id)].p1 = pos / total;
      return node_id;
    }
    std::vector<std::size_t> left, right;
    left.reserve(idx.size());
    right.reserve(idx.size());
    for (std::size_t i : idx) {
      (X.row(i)[static_cast<std::size_t>(feature)] ? right : left).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    int l = build(std::move(left));
    int r = build(std::move(right));
    auto& node = tree.nodes[static_cast<std::size_t>(node_id)];
    node.feature = feature;
    node.left = l;
    node.right = r;
    return node_id;
  }
};

double tree_probability(const Tree& tree, const std::uint8_t* bits) {
  int node = 0;
  for (;;) {
    const TreeNode& n = tree.nodes[static_cast<std::size_t>(node)];
    if (n.feature < 0) return n.p1;
    node = bits[static_cast<std::size_t>(n.feature)] ? n.right : n.left;
  }
}

}  // namespace

ForestModel train_forest(const features::FeatureMatrix& X, std::span<const int> y,
                         int n_trees, std::uint64_t seed) {
  if (X.rows == 0 || X.rows != y.size()) {
    throw Error(ErrorCode::invalid_argument, "feature matrix / label size mismatch");
  }
  if (n_trees <= 0) throw Error(ErrorCode::invalid_argument, "n_trees must be positive");
  std::vector<int> y01(y.size());
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    y01[i] = y[i] > 0 ? 1 : 0;
    (y01[i] ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::degenerate_labels, "training labels contain a single class");
  }

  ForestModel model;
  model.n_trees = n_trees;
  model.seed = seed;
  model.space_digest = X.space_digest;
  model.trees.resize(static_cast<std::size_t>(n_trees));

  const std::size_t n = X.rows;
  const std::size_t candidates = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(X.cols)))));

  // one generator stream per tree index: the forest is identical no matter
  // how the trees are distributed over threads
  parallel_for(static_cast<std::size_t>(n_trees), [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng(derive_seed(seed, t));
      std::vector<std::size_t> bootstrap(n);
      for (auto& i : bootstrap) i = static_cast<std::size_t>(rng.below(n));
      TreeBuilder builder{X, y01, candidates, rng, {}};
      builder.build(std::move(bootstrap));
      model.trees[t] = std::move(builder.tree);
    }
  });

  std::string blob(reinterpret_cast<const char*>(X.data.data()), X.data.size());
  for (int v : y01) blob.push_back(v ? '+' : '-');
  model.train_digest = digest_hex(blob);
  return model;
}

double decision_score(const ForestModel& model, const features::FeatureVector& x) {
  if (!model.space_digest.empty() && !x.space_digest.empty() &&
      model.space_digest != x.space_digest) {
    throw Error(ErrorCode::inconsistent_space, "vector bound to a different space");
  }
  double sum = 0.0;
  for (const auto& tree : model.trees) sum += tree_probability(tree, x.bits.data());
  return sum / static_cast<double>(model.trees.size());
}

std::vector<double> decision_scores(const ForestModel& model,
                                    const features::FeatureMatrix& X) {
  if (!model.space_digest.empty() && !X.space_digest.empty() &&
      model.space_digest != X.space_digest) {
    throw Error(ErrorCode::inconsistent_space, "matrix bound to a different space");
  }
  std::vector<double> scores(X.rows, 0.0);
  parallel_for(X.rows, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double sum = 0.0;
      for (const auto& tree : model.trees) sum += tree_probability(tree, X.row(i));
      scores[i] = sum / static_cast<double>(model.trees.size());
    }
  });
  return scores;
}

}  // namespace crslearn::learn
