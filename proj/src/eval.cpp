// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include "crslearn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "crslearn/error.hpp"

namespace crslearn::eval {

namespace {

constexpr double kZeroEps = 1e-9;

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

RocCurve roc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "need >= 2 scored samples");
  }
  std::size_t pos = 0, neg = 0;
  for (int label : labels) (label ? pos : neg) += 1;
  if (pos == 0 || neg == 0) {
    throw Error(ErrorCode::degenerate_labels, "both classes required for a ROC curve");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    double s = scores[order[i]];
    // all samples sharing this score flip together
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] ? tp : fp) += 1;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos), s});
  }

  double auc = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  curve.auc = auc;
  return curve;
}

double tpr_at_fpr(const RocCurve& curve, double fpr_target) {
  if (!(fpr_target > 0.0 && fpr_target < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "fpr target must lie in (0,1)");
  }
  double best = 0.0;
  for (const auto& p : curve.points) {
    if (p.fpr <= fpr_target) best = std::max(best, p.tpr);
  }
  return best;
}

SparsityReport sparsity_report(const learn::LinearModel& lr_l1,
                               const learn::LinearModel& lr_l2,
                               std::span<const int> severities,
                               std::span<const int> rule_ids) {
  if (lr_l1.weights.size() != lr_l2.weights.size() ||
      lr_l1.weights.size() != severities.size() ||
      lr_l1.weights.size() != rule_ids.size() ||
      (!lr_l1.space_digest.empty() && !lr_l2.space_digest.empty() &&
       lr_l1.space_digest != lr_l2.space_digest)) {
    throw Error(ErrorCode::inconsistent_space, "models bound to different spaces");
  }
  SparsityReport report;
  double wmin = *std::min_element(lr_l1.weights.begin(), lr_l1.weights.end());
  double wmax = *std::max_element(lr_l1.weights.begin(), lr_l1.weights.end());
  report.degenerate_normalization = !(wmax > wmin);

  for (std::size_t i = 0; i < lr_l1.weights.size(); ++i) {
    WeightRow row;
    row.rule_id = rule_ids[i];
    row.w_l1 = lr_l1.weights[i];
    row.w_l2 = lr_l2.weights[i];
    row.severity = severities[i];
    // severities run 2..5: 2 lands on min(w), 5 on max(w)
    row.severity_normalized =
        report.degenerate_normalization
            ? wmin
            : wmin + (static_cast<double>(severities[i]) - 2.0) / 3.0 * (wmax - wmin);
    row.discardable = std::fabs(row.w_l1) <= kZeroEps;
    row.benign_indicative = row.w_l1 < -kZeroEps;
    report.rows.push_back(row);
  }
  report.zero_count_l1 = learn::zero_weight_count(lr_l1);
  report.zero_count_l2 = learn::zero_weight_count(lr_l2);
  return report;
}

MetricsReport evaluate_all(const seclang::RuleSet& ruleset,
                           std::span<const data::LabeledSample> test,
                           const std::vector<PlEvaluation>& evaluations,
                           double fpr_target) {
  std::vector<engine::Payload> payloads;
  std::vector<int> labels;
  payloads.reserve(test.size());
  labels.reserve(test.size());
  for (const auto& s : test) {
    payloads.push_back(s.payload);
    labels.push_back(s.label);
  }

  MetricsReport report;
  report.metadata.emplace_back("threshold_convention", "score >= threshold");
  report.metadata.emplace_back("roc_sweep", "all distinct scores, ties grouped");
  report.metadata.emplace_back("tpr_at_fpr", "conservative, no interpolation");

  const std::string vanilla_row = "ModSec vanilla";
  report.row_names.push_back(vanilla_row);

  for (const auto& ev : evaluations) {
    report.pls.push_back(ev.pl);
    auto X = features::extract_batch(ev.space, ruleset, payloads);

    auto vanilla_scores = baseline::anomaly_scores(ev.vanilla, X);
    auto vanilla_curve = roc(vanilla_scores, labels);
    report.tpr[vanilla_row][ev.pl] = tpr_at_fpr(vanilla_curve, fpr_target);
    report.curves[vanilla_row][ev.pl] = std::move(vanilla_curve);

    for (const auto& entry : ev.models) {
      if (std::find(report.row_names.begin(), report.row_names.end(), entry.name) ==
          report.row_names.end()) {
        report.row_names.push_back(entry.name);
      }
      auto scores = entry.model.scores(X);
      auto curve = roc(scores, labels);
      report.tpr[entry.name][ev.pl] = tpr_at_fpr(curve, fpr_target);
      report.curves[entry.name][ev.pl] = std::move(curve);
    }
  }
  return report;
}

void write_roc_csv(const RocCurve& curve, const std::string& path,
                   const std::string& manifest_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  if (!manifest_hash.empty()) out << "# manifest: " << manifest_hash << "\n";
  out << "fpr,tpr,threshold\n";
  for (const auto& p : curve.points) {
    out << fmt(p.fpr) << ',' << fmt(p.tpr) << ',' << fmt(p.threshold) << "\n";
  }
}

RocCurve read_roc_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
  RocCurve curve;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("fpr,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string cell;
    RocPoint p;
    std::getline(ss, cell, ',');
    p.fpr = std::stod(cell);
    std::getline(ss, cell, ',');
    p.tpr = std::stod(cell);
    std::getline(ss, cell, ',');
    p.threshold = cell == "inf" ? std::numeric_limits<double>::infinity() : std::stod(cell);
    curve.points.push_back(p);
  }
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return curve;
}

void write_table_csv(const MetricsReport& report, const std::string& path,
                     const std::string& manifest_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  if (!manifest_hash.empty()) out << "# manifest: " << manifest_hash << "\n";
  out << "model";
  for (int pl : report.pls) out << ",PL" << pl;
  out << "\n";
  for (const auto& row : report.row_names) {
    out << row;
    for (int pl : report.pls) {
      auto it = report.tpr.find(row);
      out << ',';
      if (it != report.tpr.end() && it->second.count(pl)) {
        out << fmt(100.0 * it->second.at(pl), "%.2f");
      }
    }
    out << "\n";
  }
}

void write_weights_csv(const SparsityReport& report, const std::string& path,
                       const std::string& manifest_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  if (!manifest_hash.empty()) out << "# manifest: " << manifest_hash << "\n";
  if (report.degenerate_normalization) out << "# degenerate_normalization: true\n";
  out << "rule_id,weight_l1,weight_l2,severity,severity_normalized,discardable,benign_indicative\n";
  for (const auto& row : report.rows) {
    out << row.rule_id << ',' << fmt(row.w_l1) << ',' << fmt(row.w_l2) << ','
        << row.severity << ',' << fmt(row.severity_normalized) << ','
        << (row.discardable ? 1 : 0) << ',' << (row.benign_indicative ? 1 : 0) << "\n";
  }
}

std::string render_roc_svg(const std::map<std::string, RocCurve>& curves,
                           const std::string& title) {
  const int w = 640, h = 480, margin = 60;
  const char* palette[] = {"#c0392b", "#2980b9", "#27ae60", "#f39c12",
                           "#8e44ad", "#16a085", "#2c3e50", "#d35400"};
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='16'>"
      << title << "</text>\n";
  auto X = [&](double fpr) { return margin + fpr * (w - 2 * margin); };
  auto Y = [&](double tpr) { return h - margin - tpr * (h - 2 * margin); };
  svg << "<line x1='" << X(0) << "' y1='" << Y(0) << "' x2='" << X(1) << "' y2='"
      << Y(0) << "' stroke='black'/>\n";
  svg << "<line x1='" << X(0) << "' y1='" << Y(0) << "' x2='" << X(0) << "' y2='"
      << Y(1) << "' stroke='black'/>\n";
  svg << "<text x='" << X(0.5) << "' y='" << h - 16
      << "' text-anchor='middle' font-size='12'>False Positive Rate</text>\n";
  svg << "<text x='16' y='" << Y(0.5)
      << "' font-size='12' transform='rotate(-90 16 " << Y(0.5)
      << ")' text-anchor='middle'>True Positive Rate</text>\n";
  int idx = 0;
  int legend_y = margin;
  for (const auto& [name, curve] : curves) {
    const char* color = palette[idx % 8];
    svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (const auto& p : curve.points) {
      svg << X(p.fpr) << ',' << Y(p.tpr) << ' ';
    }
    svg << "'/>\n";
    svg << "<rect x='" << w - margin - 150 << "' y='" << legend_y - 9
        << "' width='12' height='12' fill='" << color << "'/>\n";
    svg << "<text x='" << w - margin - 132 << "' y='" << legend_y + 2
        << "' font-size='11'>" << name << " (AUC " << fmt(curve.auc, "%.4f")
        << ")</text>\n";
    legend_y += 18;
    ++idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace crslearn::eval
