// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "crslearn/features.hpp"

namespace crslearn::baseline {

// Vanilla anomaly scoring: sum the severity scores of matched rules and
// block at >= threshold. Expressed over feature vectors so it sweeps like
// any other classifier.
struct AnomalyScorer {
  std::vector<int> severities;  // aligned to the feature space, each in 2..5
  double threshold = 5.0;       // CRS default inbound anomaly threshold
  std::string space_digest;
};

AnomalyScorer make_scorer(const features::FeatureSpace& space,
                          const seclang::RuleSet& ruleset, double threshold = 5.0);

// Sum of severities over set bits; throws inconsistent-space on digest
// mismatch.
int anomaly_score(const AnomalyScorer& scorer, const features::FeatureVector& x);

// 1 iff anomaly_score >= threshold (blocking at exactly the threshold).
int classify(const AnomalyScorer& scorer, const features::FeatureVector& x);

// Batch scores for the ROC sweep; kernel-accelerated.
std::vector<double> anomaly_scores(const AnomalyScorer& scorer,
                                   const features::FeatureMatrix& X);

}  // namespace crslearn::baseline
