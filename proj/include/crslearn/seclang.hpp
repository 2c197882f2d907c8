// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <boost/regex.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crslearn/pm.hpp"
#include "crslearn/transforms.hpp"

namespace crslearn::seclang {

// ---------------------------------------------------------------------------
// Domain types

enum class SeverityName { critical, error, warning, notice };

struct Severity {
  SeverityName name = SeverityName::critical;

  // CRITICAL 5, ERROR 4, WARNING 3, NOTICE 2
  int score() const {
    switch (name) {
      case SeverityName::critical: return 5;
      case SeverityName::error: return 4;
      case SeverityName::warning: return 3;
      case SeverityName::notice: return 2;
    }
    return 5;
  }

  const char* str() const {
    switch (name) {
      case SeverityName::critical: return "CRITICAL";
      case SeverityName::error: return "ERROR";
      case SeverityName::warning: return "WARNING";
      case SeverityName::notice: return "NOTICE";
    }
    return "CRITICAL";
  }

  // Accepts the CRS spellings (case-insensitive) and the numeric levels.
  static std::optional<Severity> parse(std::string_view text);

  friend bool operator==(const Severity&, const Severity&) = default;
};

enum class SelectorKind {
  args,
  args_names,
  request_cookies,
  request_cookies_names,
  request_headers,
  request_body,
  request_uri,
  xml,  // treated as opaque text
};

const char* selector_name(SelectorKind kind);
std::optional<SelectorKind> selector_from_name(std::string_view name);

struct TargetSelector {
  SelectorKind kind = SelectorKind::args;
  std::string member;    // ":name" / ":/regex/" part, verbatim without ':'
  bool exclude = false;  // !SELECTOR — removes matching variables

  friend bool operator==(const TargetSelector&, const TargetSelector&) = default;
};

enum class OperatorKind { rx, pm, pm_from_file, detect_sqli, contains };

const char* operator_kind_name(OperatorKind kind);

struct Operator {
  OperatorKind kind = OperatorKind::rx;
  bool negated = false;
  // rx: pattern actually compiled (after any rewrite); pm: space-joined
  // phrases; pmFromFile: path as written; contains: the literal
  std::string argument;

  // compiled forms, shared read-only across threads
  std::shared_ptr<const boost::regex> regex;
  std::shared_ptr<const engine::PhraseSet> phrases;

  bool operator==(const Operator& o) const {
    return kind == o.kind && negated == o.negated && argument == o.argument;
  }
};

// One (targets, transformations, operator) triple: the body of a SecRule
// directive, without the scoring metadata.
struct RulePart {
  std::vector<TargetSelector> targets;
  std::vector<engine::Transform> transformations;
  Operator op;

  friend bool operator==(const RulePart&, const RulePart&) = default;
};

// A scoring rule; chained SecRule continuations are folded into `chain`
// with AND semantics so that the feature map sees one bit per rule id.
struct Rule {
  int id = 0;
  int paranoia_level = 1;
  Severity severity;
  std::string msg;
  std::vector<std::string> tags;
  RulePart part;
  std::vector<RulePart> chain;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct SkippedRule {
  int id = 0;  // 0 when the id itself was missing
  int line = 0;
  std::string reason;
};

struct ParseWarning {
  int id = 0;
  int line = 0;
  std::string message;
};

struct RuleSet {
  std::vector<Rule> rules;  // file order
  std::string source_digest;
  std::vector<SkippedRule> skipped;
  std::vector<ParseWarning> warnings;

  const Rule* find(int id) const;
  bool same_rules(const RuleSet& other) const;
};

// ---------------------------------------------------------------------------
// Regex rewrite table
//
// Patterns that the native dialect cannot compile get a documented,
// per-pattern replacement applied before compilation. Keyed by rule id plus
// the exact original pattern so a rewrite can never leak onto other rules.
class RewriteTable {
 public:
  RewriteTable() = default;

  static RewriteTable load_file(const std::string& path);
  static RewriteTable from_json_text(std::string_view text);

  void add(int rule_id, std::string original, std::string replacement);
  std::optional<std::string> lookup(int rule_id, std::string_view pattern) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<int, std::string>, std::string, std::less<>> entries_;
};

// ---------------------------------------------------------------------------
// Operations

enum class ParseMode { strict, permissive };

// Parses a SecLang configuration into typed rules. Strict mode throws
// Error{parse_error} naming the rule id and line for unknown operators,
// unknown transformations and uncompilable regexes; permissive mode records
// those rules in `skipped` and moves on. Non-SecRule directives are
// skipped. `base_dir` resolves @pmFromFile paths.
RuleSet parse_ruleset(std::string_view conf_text, ParseMode mode,
                      const std::string& base_dir = "",
                      const RewriteTable* rewrites = nullptr);

RuleSet parse_ruleset_file(const std::string& path, ParseMode mode,
                           const RewriteTable* rewrites = nullptr);

// Rules with paranoia_level <= pl, file order preserved (PL enablement is
// nested). Throws Error{invalid_argument} for pl outside 1..4.
RuleSet rules_at_pl(const RuleSet& ruleset, int pl);

// Canonical debug serialization: stable-ordered JSON. Re-parsing via
// ruleset_from_json yields an identical RuleSet (modulo skip/warning logs).
std::string ruleset_to_json(const RuleSet& ruleset);
RuleSet ruleset_from_json(std::string_view json_text);

}  // namespace crslearn::seclang
