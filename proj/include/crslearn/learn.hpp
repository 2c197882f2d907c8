// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crslearn/features.hpp"

namespace crslearn::learn {

enum class Loss { logistic, hinge, squared_hinge };
enum class Penalty { l1, l2 };

const char* loss_name(Loss loss);
const char* penalty_name(Penalty penalty);
std::optional<Loss> loss_from_name(std::string_view name);
std::optional<Penalty> penalty_from_name(std::string_view name);

struct TrainConfig {
  double C = 0.5;
  Penalty penalty = Penalty::l2;
  Loss loss = Loss::logistic;
  int max_iters = 10000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  Loss loss = Loss::logistic;
  Penalty penalty = Penalty::l2;
  double C = 0.5;
  std::uint64_t seed = 0;
  std::string space_digest;
  std::string train_digest;
  bool converged = true;
  int iterations = 0;
  double objective = 0.0;
};

// J(w,b) = C * sum_i loss(y_i, w.x_i + b) + R(w), R = |w|_1 or 0.5*|w|_2^2,
// bias unpenalized. Shared with the test oracles.
double objective_value(const features::FeatureMatrix& X, std::span<const int> y,
                       Loss loss, Penalty penalty, double C,
                       std::span<const double> w, double b);

// Unregularized pieces, exposed for the finite-difference gradient checks:
// C * sum_i loss and its analytic gradient.
double loss_sum(const features::FeatureMatrix& X, std::span<const int> y, Loss loss,
                double C, std::span<const double> w, double b);
void loss_gradient(const features::FeatureMatrix& X, std::span<const int> y, Loss loss,
                   double C, std::span<const double> w, double b,
                   std::vector<double>* grad_w, double* grad_b);

// Proximal gradient (FISTA with backtracking) for the smooth losses; the
// plain hinge falls back to a decaying-step subgradient scheme. l1 zeros
// come from soft-thresholding, never from float comparison. Deterministic
// for a fixed seed. Labels must be -1/+1 (0 is accepted as -1).
LinearModel train_linear(const features::FeatureMatrix& X, std::span<const int> y,
                         const TrainConfig& cfg);

double decision_score(const LinearModel& model, const features::FeatureVector& x);
std::vector<double> decision_scores(const LinearModel& model,
                                    const features::FeatureMatrix& X);

int zero_weight_count(const LinearModel& model, double eps = 1e-9);

// ---------------------------------------------------------------------
// Random forest on binary features: bootstrap per tree, Gini splits over
// sqrt(d) candidate features, grown until leaves are pure or unsplittable.

struct TreeNode {
  int feature = -1;  // -1: leaf
  int left = -1;
  int right = -1;
  double p1 = 0.0;  // positive-class probability at leaves
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

struct ForestModel {
  std::vector<Tree> trees;
  int n_trees = 100;
  std::uint64_t seed = 0;
  std::string space_digest;
  std::string train_digest;
};

// Labels in {0,1} ({-1,+1} accepted). One generator stream per tree index,
// so results do not depend on thread count.
ForestModel train_forest(const features::FeatureMatrix& X, std::span<const int> y,
                         int n_trees = 100, std::uint64_t seed = 0);

// Mean positive-class probability across trees.
double decision_score(const ForestModel& model, const features::FeatureVector& x);
std::vector<double> decision_scores(const ForestModel& model,
                                    const features::FeatureMatrix& X);

// ---------------------------------------------------------------------
// Model artifact: one JSON document per trained model.

std::string model_to_json(const LinearModel& model, const std::vector<int>& feature_ids);
std::string model_to_json(const ForestModel& model, const std::vector<int>& feature_ids);

struct LoadedModel {
  std::optional<LinearModel> linear;
  std::optional<ForestModel> forest;
  std::vector<int> feature_ids;

  double score(const features::FeatureVector& x) const {
    return linear ? decision_score(*linear, x) : decision_score(*forest, x);
  }
  std::vector<double> scores(const features::FeatureMatrix& X) const {
    return linear ? decision_scores(*linear, X) : decision_scores(*forest, X);
  }
};

LoadedModel model_from_json(std::string_view text);

}  // namespace crslearn::learn
