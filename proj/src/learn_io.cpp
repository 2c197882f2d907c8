// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include <nlohmann/json.hpp>

#include <cstdio>

#include "crslearn/error.hpp"
#include "crslearn/learn.hpp"
#include "crslearn/version.hpp"

namespace crslearn::learn {

namespace {

using json = nlohmann::ordered_json;

// 17 significant digits: enough to reproduce the double bit for bit.
json number17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return json::parse(buf);
}

json weights_array(const std::vector<double>& w) {
  json arr = json::array();
  for (double v : w) arr.push_back(number17(v));
  return arr;
}

json common_header(const char* kind, const std::vector<int>& feature_ids) {
  json doc;
  doc["format"] = "crs-learn-model";
  doc["format_version"] = 1;
  doc["tool_version"] = kVersion;
  doc["kind"] = kind;
  doc["feature_ids"] = feature_ids;
  return doc;
}

}  // namespace

std::string model_to_json(const LinearModel& model, const std::vector<int>& feature_ids) {
  json doc = common_header("linear", feature_ids);
  doc["loss"] = loss_name(model.loss);
  doc["penalty"] = penalty_name(model.penalty);
  doc["C"] = number17(model.C);
  doc["seed"] = model.seed;
  doc["weights"] = weights_array(model.weights);
  doc["bias"] = number17(model.bias);
  doc["objective"] = number17(model.objective);
  doc["iterations"] = model.iterations;
  doc["converged"] = model.converged;
  doc["space_digest"] = model.space_digest;
  doc["train_digest"] = model.train_digest;
  return doc.dump(2);
}

std::string model_to_json(const ForestModel& model, const std::vector<int>& feature_ids) {
  json doc = common_header("forest", feature_ids);
  doc["n_trees"] = model.n_trees;
  doc["seed"] = model.seed;
  json trees = json::array();
  for (const auto& tree : model.trees) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
      nodes.push_back(json::array({n.feature, n.left, n.right, number17(n.p1)}));
    }
    trees.push_back(std::move(nodes));
  }
  doc["trees"] = std::move(trees);
  doc["space_digest"] = model.space_digest;
  doc["train_digest"] = model.train_digest;
  return doc.dump(2);
}

LoadedModel model_from_json(std::string_view text) {
  json doc = json::parse(text);
  if (doc.value("format", std::string{}) != "crs-learn-model") {
    throw Error(ErrorCode::format_error, "not a crs-learn model document");
  }
  LoadedModel out;
  out.feature_ids = doc.at("feature_ids").get<std::vector<int>>();
  std::string kind = doc.at("kind").get<std::string>();
  if (kind == "linear") {
    LinearModel m;
    auto loss = loss_from_name(doc.at("loss").get<std::string>());
    auto penalty = penalty_from_name(doc.at("penalty").get<std::string>());
    if (!loss || !penalty) throw Error(ErrorCode::format_error, "bad loss/penalty");
    m.loss = *loss;
    m.penalty = *penalty;
    m.C = doc.at("C").get<double>();
    m.seed = doc.value("seed", 0ull);
    m.weights = doc.at("weights").get<std::vector<double>>();
    m.bias = doc.at("bias").get<double>();
    m.objective = doc.value("objective", 0.0);
    m.iterations = doc.value("iterations", 0);
    m.converged = doc.value("converged", true);
    m.space_digest = doc.value("space_digest", std::string{});
    m.train_digest = doc.value("train_digest", std::string{});
    out.linear = std::move(m);
  } else if (kind == "forest") {
    ForestModel m;
    m.n_trees = doc.at("n_trees").get<int>();
    m.seed = doc.value("seed", 0ull);
    for (const auto& tj : doc.at("trees")) {
      Tree tree;
      for (const auto& nj : tj) {
        TreeNode node;
        node.feature = nj.at(0).get<int>();
        node.left = nj.at(1).get<int>();
        node.right = nj.at(2).get<int>();
        node.p1 = nj.at(3).get<double>();
        tree.nodes.push_back(node);
      }
      m.trees.push_back(std::move(tree));
    }
    m.space_digest = doc.value("space_digest", std::string{});
    m.train_digest = doc.value("train_digest", std::string{});
    out.forest = std::move(m);
  } else {
    throw Error(ErrorCode::format_error, "unknown model kind: " + kind);
  }
  return out;
}

}  // namespace crslearn::learn
