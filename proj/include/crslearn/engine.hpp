// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crslearn/seclang.hpp"
#include "crslearn/sqli.hpp"
#include "crslearn/transforms.hpp"

namespace crslearn::engine {

// A dataset sample exactly as stored; transformations never touch it.
struct Payload {
  std::string raw;
};

// Variables materialized from a Payload under the single-argument
// convention: the whole sample is the value of one query parameter `q`.
struct EvaluationContext {
  using Entry = std::pair<std::string, std::string>;  // (name, value)
  std::map<seclang::SelectorKind, std::vector<Entry>> variables;

  const std::vector<Entry>* find(seclang::SelectorKind kind) const {
    auto it = variables.find(kind);
    return it == variables.end() ? nullptr : &it->second;
  }
};

// Percent-encodes everything outside the unreserved set, so the generated
// REQUEST_URI parses back as exactly one parameter.
std::string url_encode_component(std::string_view value);

// ARGS = [("q", raw)], ARGS_NAMES = [("q","q")],
// REQUEST_URI = "/?q=" + url-encoded raw; every other selector is empty.
EvaluationContext materialize_context(const Payload& payload);

struct MatchResult {
  bool matched = false;
  std::optional<std::string> matched_variable;  // "ARGS:q" style
};

// True iff some targeted (name, value), after the part's transformation
// chain, satisfies the operator — for every chain part (AND). Negated
// operators invert the per-value test. Pure; total.
MatchResult match_rule(const seclang::Rule& rule, const EvaluationContext& ctx);

}  // namespace crslearn::engine
