// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include "crslearn/baseline.hpp"

#include "crslearn/error.hpp"
#include "crslearn/kernels.hpp"
#include "crslearn/parallel.hpp"

namespace crslearn::baseline {

AnomalyScorer make_scorer(const features::FeatureSpace& space,
                          const seclang::RuleSet& ruleset, double threshold) {
  AnomalyScorer scorer;
  scorer.threshold = threshold;
  scorer.space_digest = space.digest();
  scorer.severities.reserve(space.dim());
  for (int id : space.rule_ids) {
    const auto* rule = ruleset.find(id);
    if (!rule) {
      throw Error(ErrorCode::inconsistent_space,
                  "rule " + std::to_string(id) + " missing from ruleset");
    }
    scorer.severities.push_back(rule->severity.score());
  }
  return scorer;
}

int anomaly_score(const AnomalyScorer& scorer, const features::FeatureVector& x) {
  if (!scorer.space_digest.empty() && !x.space_digest.empty() &&
      scorer.space_digest != x.space_digest) {
    throw Error(ErrorCode::inconsistent_space, "vector bound to a different space");
  }
  if (x.bits.size() != scorer.severities.size()) {
    throw Error(ErrorCode::inconsistent_space, "vector/scorer dimension mismatch");
  }
  int score = 0;
  for (std::size_t i = 0; i < x.bits.size(); ++i) {
    if (x.bits[i]) score += scorer.severities[i];
  }
  return score;
}

int classify(const AnomalyScorer& scorer, const features::FeatureVector& x) {
  return anomaly_score(scorer, x) >= scorer.threshold ? 1 : 0;
}

std::vector<double> anomaly_scores(const AnomalyScorer& scorer,
                                   const features::FeatureMatrix& X) {
  if (!scorer.space_digest.empty() && !X.space_digest.empty() &&
      scorer.space_digest != X.space_digest) {
    throw Error(ErrorCode::inconsistent_space, "matrix bound to a different space");
  }
  if (X.cols != scorer.severities.size()) {
    throw Error(ErrorCode::inconsistent_space, "matrix/scorer dimension mismatch");
  }
  std::vector<double> weights(scorer.severities.begin(), scorer.severities.end());
  std::vector<double> scores(X.rows, 0.0);
  parallel_for(X.rows, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      scores[i] = kernels::dot_bits(X.row(i), weights.data(), X.cols);
    }
  });
  return scores;
}

}  // namespace crslearn::baseline
