// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include "crslearn/features.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "crslearn/digest.hpp"
#include "crslearn/error.hpp"
#include "crslearn/parallel.hpp"

namespace crslearn::features {

namespace {

using json = nlohmann::ordered_json;

// Rules resolved once per batch; match order is per-row, so parallel
// evaluation stays bit-identical to sequential.
std::vector<const seclang::Rule*> resolve_rules(const FeatureSpace& space,
                                                const seclang::RuleSet& ruleset) {
  std::vector<const seclang::Rule*> rules;
  rules.reserve(space.rule_ids.size());
  for (int id : space.rule_ids) {
    const auto* rule = ruleset.find(id);
    if (!rule) {
      throw Error(ErrorCode::inconsistent_space,
                  "rule " + std::to_string(id) + " missing from ruleset");
    }
    rules.push_back(rule);
  }
  return rules;
}

}  // namespace

std::optional<std::size_t> FeatureSpace::index_of(int rule_id) const {
  auto it = std::lower_bound(rule_ids.begin(), rule_ids.end(), rule_id);
  if (it == rule_ids.end() || *it != rule_id) return std::nullopt;
  return static_cast<std::size_t>(it - rule_ids.begin());
}

std::string FeatureSpace::digest() const {
  std::string blob = ruleset_digest + "|pl" + std::to_string(pl) + "|";
  for (int id : rule_ids) {
    blob += std::to_string(id);
    blob += ',';
  }
  return digest_hex(blob);
}

FeatureSpace derive_feature_space(const seclang::RuleSet& ruleset, int pl,
                                  std::span<const engine::Payload> training_payloads) {
  return derive_feature_space(ruleset, pl, training_payloads, nullptr);
}

FeatureSpace derive_feature_space(const seclang::RuleSet& ruleset, int pl,
                                  std::span<const engine::Payload> training_payloads,
                                  std::vector<int>* discarded_ids) {
  if (training_payloads.empty()) {
    throw Error(ErrorCode::invalid_argument, "no training payloads to derive from");
  }
  auto enabled = seclang::rules_at_pl(ruleset, pl);

  std::vector<std::uint8_t> fired(enabled.rules.size(), 0);
  parallel_for(training_payloads.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint8_t> local(enabled.rules.size(), 0);
    for (std::size_t i = begin; i < end; ++i) {
      auto ctx = engine::materialize_context(training_payloads[i]);
      for (std::size_t r = 0; r < enabled.rules.size(); ++r) {
        if (!local[r] && engine::match_rule(enabled.rules[r], ctx).matched) local[r] = 1;
      }
    }
    // merge is monotone (0 -> 1 only), relaxed stores suffice
    for (std::size_t r = 0; r < local.size(); ++r) {
      if (local[r]) __atomic_store_n(&fired[r], 1, __ATOMIC_RELAXED);
    }
  });

  FeatureSpace space;
  space.pl = pl;
  space.ruleset_digest = ruleset.source_digest;
  for (std::size_t r = 0; r < enabled.rules.size(); ++r) {
    if (fired[r]) {
      space.rule_ids.push_back(enabled.rules[r].id);
    } else if (discarded_ids) {
      discarded_ids->push_back(enabled.rules[r].id);
    }
  }
  std::sort(space.rule_ids.begin(), space.rule_ids.end());
  if (discarded_ids) std::sort(discarded_ids->begin(), discarded_ids->end());
  if (space.rule_ids.empty()) {
    throw Error(ErrorCode::degenerate_space, "no rule fires on the training payloads");
  }
  return space;
}

FeatureVector extract(const FeatureSpace& space, const seclang::RuleSet& ruleset,
                      const engine::Payload& payload) {
  auto rules = resolve_rules(space, ruleset);
  FeatureVector vec;
  vec.space_digest = space.digest();
  vec.bits.resize(space.dim(), 0);
  auto ctx = engine::materialize_context(payload);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    vec.bits[i] = engine::match_rule(*rules[i], ctx).matched ? 1 : 0;
  }
  return vec;
}

FeatureMatrix extract_batch(const FeatureSpace& space, const seclang::RuleSet& ruleset,
                            std::span<const engine::Payload> payloads) {
  auto rules = resolve_rules(space, ruleset);
  FeatureMatrix matrix;
  matrix.rows = payloads.size();
  matrix.cols = space.dim();
  matrix.space_digest = space.digest();
  matrix.data.assign(matrix.rows * matrix.cols, 0);
  parallel_for(payloads.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto ctx = engine::materialize_context(payloads[i]);
      std::uint8_t* row = matrix.row(i);
      for (std::size_t r = 0; r < rules.size(); ++r) {
        row[r] = engine::match_rule(*rules[r], ctx).matched ? 1 : 0;
      }
    }
  });
  return matrix;
}

void write_matrix_csv(const FeatureMatrix& matrix, const FeatureSpace& space,
                      const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& comments) {
  if (space.dim() != matrix.cols) {
    throw Error(ErrorCode::inconsistent_space, "matrix/space dimension mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  for (const auto& [key, value] : comments) {
    out << "# " << key << ": " << value << "\n";
  }
  for (std::size_t c = 0; c < matrix.cols; ++c) {
    if (c) out << ',';
    out << space.rule_ids[c];
  }
  out << "\n";
  for (std::size_t r = 0; r < matrix.rows; ++r) {
    const std::uint8_t* row = matrix.row(r);
    for (std::size_t c = 0; c < matrix.cols; ++c) {
      if (c) out << ',';
      out << static_cast<int>(row[c] ? 1 : 0);
    }
    out << "\n";
  }
}

FeatureMatrix read_matrix_csv(const std::string& path, FeatureSpace* space_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
  std::string line;
  std::vector<int> ids;
  // skip comments, then header
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) ids.push_back(std::stoi(cell));
    break;
  }
  if (ids.empty()) throw Error(ErrorCode::format_error, "missing feature header in " + path);
  FeatureMatrix matrix;
  matrix.cols = ids.size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= matrix.cols) throw Error(ErrorCode::format_error, "row wider than header");
      matrix.data.push_back(cell == "1" ? 1 : 0);
      ++c;
    }
    if (c != matrix.cols) throw Error(ErrorCode::format_error, "row narrower than header");
    ++matrix.rows;
  }
  if (space_out) {
    space_out->rule_ids = ids;
    space_out->pl = 0;
    space_out->ruleset_digest.clear();
  }
  return matrix;
}

void write_matrix_crsf(const FeatureMatrix& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out.write("CRSF", 4);
  std::uint8_t version = 1;
  out.write(reinterpret_cast<const char*>(&version), 1);
  std::uint32_t d = static_cast<std::uint32_t>(matrix.cols);
  std::uint8_t dle[4] = {static_cast<std::uint8_t>(d & 0xff),
                         static_cast<std::uint8_t>((d >> 8) & 0xff),
                         static_cast<std::uint8_t>((d >> 16) & 0xff),
                         static_cast<std::uint8_t>((d >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(dle), 4);
  const std::size_t row_bytes = (matrix.cols + 7) / 8;
  std::vector<std::uint8_t> packed(row_bytes);
  for (std::size_t r = 0; r < matrix.rows; ++r) {
    std::fill(packed.begin(), packed.end(), 0);
    const std::uint8_t* row = matrix.row(r);
    for (std::size_t c = 0; c < matrix.cols; ++c) {
      if (row[c]) packed[c >> 3] |= static_cast<std::uint8_t>(1u << (c & 7));
    }
    out.write(reinterpret_cast<const char*>(packed.data()),
              static_cast<std::streamsize>(row_bytes));
  }
}

FeatureMatrix read_matrix_crsf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string_view(magic, 4) != "CRSF") {
    throw Error(ErrorCode::format_error, "not a CRSF file: " + path);
  }
  std::uint8_t version = 0;
  in.read(reinterpret_cast<char*>(&version), 1);
  if (version != 1) throw Error(ErrorCode::format_error, "unsupported CRSF version");
  std::uint8_t dle[4];
  in.read(reinterpret_cast<char*>(dle), 4);
  if (in.gcount() != 4) throw Error(ErrorCode::format_error, "truncated CRSF header");
  std::uint32_t d = static_cast<std::uint32_t>(dle[0]) |
                    (static_cast<std::uint32_t>(dle[1]) << 8) |
                    (static_cast<std::uint32_t>(dle[2]) << 16) |
                    (static_cast<std::uint32_t>(dle[3]) << 24);
  FeatureMatrix matrix;
  matrix.cols = d;
  const std::size_t row_bytes = (matrix.cols + 7) / 8;
  std::vector<std::uint8_t> packed(row_bytes);
  while (in.read(reinterpret_cast<char*>(packed.data()),
                 static_cast<std::streamsize>(row_bytes))) {
    for (std::size_t c = 0; c < matrix.cols; ++c) {
      matrix.data.push_back((packed[c >> 3] >> (c & 7)) & 1u);
    }
    ++matrix.rows;
  }
  if (in.gcount() != 0) throw Error(ErrorCode::format_error, "trailing bytes in CRSF file");
  return matrix;
}

std::string space_to_json(const FeatureSpace& space) {
  json doc;
  doc["format"] = "crs-learn-feature-space";
  doc["version"] = 1;
  doc["pl"] = space.pl;
  doc["ruleset_digest"] = space.ruleset_digest;
  doc["rule_ids"] = space.rule_ids;
  doc["space_digest"] = space.digest();
  return doc.dump(2);
}

FeatureSpace space_from_json(std::string_view text) {
  json doc = json::parse(text);
  if (doc.value("format", std::string{}) != "crs-learn-feature-space") {
    throw Error(ErrorCode::format_error, "not a feature-space document");
  }
  FeatureSpace space;
  space.pl = doc.at("pl").get<int>();
  space.ruleset_digest = doc.value("ruleset_digest", std::string{});
  space.rule_ids = doc.at("rule_ids").get<std::vector<int>>();
  if (doc.contains("space_digest") &&
      doc.at("space_digest").get<std::string>() != space.digest()) {
    throw Error(ErrorCode::inconsistent_space, "feature-space digest mismatch");
  }
  return space;
}

}  // namespace crslearn::features
