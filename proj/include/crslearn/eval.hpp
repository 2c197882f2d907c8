// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "crslearn/baseline.hpp"
#include "crslearn/data.hpp"
#include "crslearn/features.hpp"
#include "crslearn/learn.hpp"

namespace crslearn::eval {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

// Points sorted by ascending fpr, starting at (0,0) for the +inf threshold
// and ending at (1,1); auc is the trapezoidal integral.
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Standard sweep over all distinct scores as thresholds (classify positive
// at score >= threshold); ties move together. Throws degenerate-labels
// unless both classes are present.
RocCurve roc(std::span<const double> scores, std::span<const int> labels);

// Conservative readout: max TPR over achievable points with fpr <= target,
// no interpolation.
double tpr_at_fpr(const RocCurve& curve, double fpr_target = 0.01);

// ---------------------------------------------------------------------
// Fig. 3 style weight comparison: l1 vs l2 logistic-regression weights next
// to the vanilla severity scores min-max mapped onto the l1 weight range.

struct WeightRow {
  int rule_id = 0;
  double w_l1 = 0.0;
  double w_l2 = 0.0;
  int severity = 0;
  double severity_normalized = 0.0;
  bool discardable = false;        // w_l1 exactly zero
  bool benign_indicative = false;  // w_l1 < 0
};

struct SparsityReport {
  std::vector<WeightRow> rows;
  int zero_count_l1 = 0;
  int zero_count_l2 = 0;
  bool degenerate_normalization = false;
};

SparsityReport sparsity_report(const learn::LinearModel& lr_l1,
                               const learn::LinearModel& lr_l2,
                               std::span<const int> severities,
                               std::span<const int> rule_ids);

// ---------------------------------------------------------------------
// Full protocol: for each PL, vanilla + every trained model on identical
// test features; table of TPR@1%FPR in Table-1 layout.

struct ModelEntry {
  std::string name;  // display name, e.g. "LR (l1)"
  learn::LoadedModel model;
};

struct PlEvaluation {
  int pl = 0;
  features::FeatureSpace space;
  baseline::AnomalyScorer vanilla;
  std::vector<ModelEntry> models;
};

struct MetricsReport {
  std::vector<int> pls;
  std::vector<std::string> row_names;  // "ModSec vanilla" first
  std::map<std::string, std::map<int, double>> tpr;  // row -> pl -> TPR@1%FPR
  std::map<std::string, std::map<int, RocCurve>> curves;
  SparsityReport sparsity;
  bool has_sparsity = false;
  std::vector<std::pair<std::string, std::string>> metadata;
};

MetricsReport evaluate_all(const seclang::RuleSet& ruleset,
                           std::span<const data::LabeledSample> test,
                           const std::vector<PlEvaluation>& evaluations,
                           double fpr_target = 0.01);

// ---------------------------------------------------------------------
// Report files. Every CSV starts with "# manifest: <hash>" when a manifest
// hash is provided.

void write_roc_csv(const RocCurve& curve, const std::string& path,
                   const std::string& manifest_hash = "");
RocCurve read_roc_csv(const std::string& path);

void write_table_csv(const MetricsReport& report, const std::string& path,
                     const std::string& manifest_hash = "");

void write_weights_csv(const SparsityReport& report, const std::string& path,
                       const std::string& manifest_hash = "");

// Optional convenience rendering, generated from curve data.
std::string render_roc_svg(const std::map<std::string, RocCurve>& curves,
                           const std::string& title);

}  // namespace crslearn::eval
