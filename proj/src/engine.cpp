// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include "crslearn/engine.hpp"

#include <boost/regex.hpp>

namespace crslearn::engine {

namespace {

using seclang::OperatorKind;
using seclang::RulePart;
using seclang::SelectorKind;
using seclang::TargetSelector;

bool operator_hit(const seclang::Operator& op, std::string_view value) {
  switch (op.kind) {
    case OperatorKind::rx:
      // @rx is an unanchored substring search
      return boost::regex_search(value.begin(), value.end(), *op.regex);
    case OperatorKind::pm:
    case OperatorKind::pm_from_file:
      return op.phrases->matches(value);
    case OperatorKind::detect_sqli:
      return detect_sqli(value);
    case OperatorKind::contains:
      return value.find(op.argument) != std::string_view::npos;
  }
  return false;
}

// Exclusions name a variable (exact, or /regex/ on the name); with the
// single-argument convention they only ever remove `q` itself.
bool member_matches(const std::string& member, const std::string& name) {
  if (member.empty()) return true;
  if (member.size() >= 2 && member.front() == '/' && member.back() == '/') {
    boost::regex re(member.substr(1, member.size() - 2), boost::regex::perl);
    return boost::regex_search(name, re);
  }
  return member == name;
}

bool part_matches(const RulePart& part, const EvaluationContext& ctx,
                  std::string* matched_variable) {
  for (const auto& target : part.targets) {
    if (target.exclude) continue;
    const auto* entries = ctx.find(target.kind);
    if (!entries) continue;
    for (const auto& [name, value] : *entries) {
      if (!member_matches(target.member, name)) continue;
      bool excluded = false;
      for (const auto& ex : part.targets) {
        if (ex.exclude && ex.kind == target.kind && member_matches(ex.member, name)) {
          excluded = true;
          break;
        }
      }
      if (excluded) continue;
      std::string transformed = transform(value, part.transformations);
      bool hit = operator_hit(part.op, transformed);
      if (part.op.negated) hit = !hit;
      if (hit) {
        if (matched_variable) {
          *matched_variable = std::string(seclang::selector_name(target.kind)) +
                              (name.empty() ? "" : ":" + name);
        }
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::string url_encode_component(std::string_view value) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(value.size());
  for (unsigned char c : value) {
    bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                      c == '.' || c == '~';
    if (unreserved) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xf]);
    }
  }
  return out;
}

EvaluationContext materialize_context(const Payload& payload) {
  EvaluationContext ctx;
  ctx.variables[SelectorKind::args] = {{"q", payload.raw}};
  ctx.variables[SelectorKind::args_names] = {{"q", "q"}};
  ctx.variables[SelectorKind::request_uri] = {
      {"", "/?q=" + url_encode_component(payload.raw)}};
  return ctx;
}

MatchResult match_rule(const seclang::Rule& rule, const EvaluationContext& ctx) {
  MatchResult result;
  std::string first_variable;
  if (!part_matches(rule.part, ctx, &first_variable)) return result;
  for (const auto& part : rule.chain) {
    if (!part_matches(part, ctx, nullptr)) return result;
  }
  result.matched = true;
  result.matched_variable = first_variable;
  return result;
}

}  // namespace crslearn::engine
