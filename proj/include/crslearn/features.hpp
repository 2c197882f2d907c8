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

#include "crslearn/engine.hpp"
#include "crslearn/seclang.hpp"

namespace crslearn::features {

// The ordered set of active rule ids: one feature bit per rule, ascending
// id order (stable across rule-file reorderings).
struct FeatureSpace {
  std::vector<int> rule_ids;
  int pl = 4;
  std::string ruleset_digest;

  std::size_t dim() const { return rule_ids.size(); }
  std::optional<std::size_t> index_of(int rule_id) const;

  // Binds vectors and models to this exact space.
  std::string digest() const;
};

struct FeatureVector {
  std::vector<std::uint8_t> bits;
  std::string space_digest;
};

// Row-major 0/1 bytes; the layout the arithmetic kernels consume.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> data;
  std::string space_digest;

  const std::uint8_t* row(std::size_t i) const { return data.data() + i * cols; }
  std::uint8_t* row(std::size_t i) { return data.data() + i * cols; }
};

// Evaluates rules_at_pl(ruleset, pl) over the training payloads and keeps
// the ids that fired at least once, ascending. Pruning uses training data
// only. Throws degenerate-space if nothing ever fires.
FeatureSpace derive_feature_space(const seclang::RuleSet& ruleset, int pl,
                                  std::span<const engine::Payload> training_payloads);

// Also reports which enabled ids never fired (the discarded rules).
FeatureSpace derive_feature_space(const seclang::RuleSet& ruleset, int pl,
                                  std::span<const engine::Payload> training_payloads,
                                  std::vector<int>* discarded_ids);

FeatureVector extract(const FeatureSpace& space, const seclang::RuleSet& ruleset,
                      const engine::Payload& payload);

// Row i equals extract(payloads[i]); data-parallel but bit-identical to
// sequential evaluation.
FeatureMatrix extract_batch(const FeatureSpace& space, const seclang::RuleSet& ruleset,
                            std::span<const engine::Payload> payloads);

// --- persistence ------------------------------------------------------
// CSV: optional leading '# key: value' comment lines, then a header row of
// rule ids, then 0/1 rows.
void write_matrix_csv(const FeatureMatrix& matrix, const FeatureSpace& space,
                      const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& comments = {});
FeatureMatrix read_matrix_csv(const std::string& path, FeatureSpace* space_out = nullptr);

// CRSF: magic "CRSF", version u8, d as u32 little-endian, then bit-packed
// rows (LSB-first within each byte, ceil(d/8) bytes per row). The row count
// is implied by the file size.
void write_matrix_crsf(const FeatureMatrix& matrix, const std::string& path);
FeatureMatrix read_matrix_crsf(const std::string& path);

std::string space_to_json(const FeatureSpace& space);
FeatureSpace space_from_json(std::string_view text);

}  // namespace crslearn::features
