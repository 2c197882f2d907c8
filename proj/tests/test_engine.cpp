// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <string>

#include "crslearn/engine.hpp"
#include "crslearn/error.hpp"
#include "crslearn/pm.hpp"
#include "crslearn/seclang.hpp"
#include "crslearn/sqli.hpp"
#include "support/paths.hpp"

using namespace crslearn;
using engine::EvaluationContext;
using engine::materialize_context;
using engine::Payload;

namespace {

seclang::Rule make_rx_rule(int id, const std::string& pattern) {
  seclang::Rule rule;
  rule.id = id;
  rule.part.targets = {{seclang::SelectorKind::args, "", false}};
  rule.part.op.kind = seclang::OperatorKind::rx;
  rule.part.op.argument = pattern;
  rule.part.op.regex =
      std::make_shared<const boost::regex>(pattern, boost::regex::perl);
  return rule;
}

}  // namespace

TEST_CASE("phrase set matches any phrase, case-insensitively") {
  engine::PhraseSet set({"sleep(", "benchmark(", "pg_sleep"});
  CHECK(set.matches("1 AND SLEEP(5)"));
  CHECK(set.matches("BeNcHmArK(100,md5(1))"));
  CHECK(!set.matches("asleep at the wheel"));
  CHECK(!set.matches(""));
  // overlapping phrases: suffix of one is a prefix of another
  engine::PhraseSet overlap({"abcd", "cdef"});
  CHECK(overlap.matches("xxabcdefxx"));
  CHECK(overlap.matches("zzcdefzz"));
  CHECK(!overlap.matches("abcef"));
}

TEST_CASE("phrase set rejects empty list") {
  CHECK_THROWS_AS(engine::PhraseSet({}), Error);
}

TEST_CASE("materialize_context places payload under q") {
  auto ctx = materialize_context(Payload{"admin'-- "});
  const auto* args = ctx.find(seclang::SelectorKind::args);
  REQUIRE(args != nullptr);
  REQUIRE(args->size() == 1);
  CHECK((*args)[0].first == "q");
  CHECK((*args)[0].second == "admin'-- ");

  auto empty = materialize_context(Payload{""});
  const auto* eargs = empty.find(seclang::SelectorKind::args);
  REQUIRE(eargs != nullptr);
  REQUIRE(eargs->size() == 1);
  CHECK((*eargs)[0].second == "");
}

TEST_CASE("request uri is percent-encoded to a single parameter") {
  auto ctx = materialize_context(Payload{"a&b=c d"});
  const auto* uri = ctx.find(seclang::SelectorKind::request_uri);
  REQUIRE(uri != nullptr);
  const std::string& u = (*uri)[0].second;
  CHECK(u == "/?q=a%26b%3Dc%20d");
  // re-parse: exactly one '=' and no raw '&' after the '?'
  auto query = u.substr(u.find('?') + 1);
  CHECK(query.find('&') == std::string::npos);
  CHECK(std::count(query.begin(), query.end(), '=') == 1);
}

TEST_CASE("match_rule basic regex hit and miss") {
  auto rule = make_rx_rule(1, "(?i)union\\s+select");
  auto hit = engine::match_rule(rule, materialize_context(Payload{"1 UNION SELECT password"}));
  CHECK(hit.matched);
  CHECK(hit.matched_variable == "ARGS:q");

  auto miss = engine::match_rule(make_rx_rule(2, "union"),
                                 materialize_context(Payload{""}));
  CHECK(!miss.matched);
}

TEST_CASE("chained rules require every part to match") {
  auto rule = make_rx_rule(3, "select");
  seclang::RulePart part2;
  part2.targets = {{seclang::SelectorKind::args, "", false}};
  part2.op.kind = seclang::OperatorKind::rx;
  part2.op.argument = "from";
  part2.op.regex = std::make_shared<const boost::regex>("from", boost::regex::perl);
  rule.chain.push_back(part2);

  CHECK(!engine::match_rule(rule, materialize_context(Payload{"select 1"})).matched);
  CHECK(engine::match_rule(rule, materialize_context(Payload{"select x from t"})).matched);
}

TEST_CASE("negated operator inverts the per-value test") {
  auto rule = make_rx_rule(4, "admin");
  rule.part.op.negated = true;
  CHECK(!engine::match_rule(rule, materialize_context(Payload{"admin"})).matched);
  CHECK(engine::match_rule(rule, materialize_context(Payload{"guest"})).matched);
}

TEST_CASE("transformations apply before the operator") {
  auto rule = make_rx_rule(5, "union select");
  rule.part.transformations = {engine::Transform::url_decode,
                               engine::Transform::lowercase,
                               engine::Transform::compress_whitespace};
  CHECK(engine::match_rule(rule, materialize_context(Payload{"UNION%20%20SELECT"})).matched);

  auto bare = make_rx_rule(5, "union select");
  CHECK(!engine::match_rule(bare, materialize_context(Payload{"UNION%20%20SELECT"})).matched);
}

TEST_CASE("match_rule is deterministic") {
  auto rule = make_rx_rule(6, "(?i)or\\s+1=1");
  Payload p{"' OR 1=1-- "};
  auto r1 = engine::match_rule(rule, materialize_context(p));
  auto r2 = engine::match_rule(rule, materialize_context(p));
  CHECK(r1.matched == r2.matched);
  CHECK(r1.matched_variable == r2.matched_variable);
}

TEST_CASE("detect_sqli canonical verdicts") {
  CHECK(engine::detect_sqli("1' OR '1'='1"));
  CHECK(!engine::detect_sqli("hello world"));
  CHECK(!engine::detect_sqli("O'Brien"));
}

TEST_CASE("detect_sqli catches common injection shapes") {
  CHECK(engine::detect_sqli("' OR 1=1-- "));
  CHECK(engine::detect_sqli("admin'-- "));
  CHECK(engine::detect_sqli("1 UNION SELECT password FROM users"));
  CHECK(engine::detect_sqli("1; DROP TABLE users"));
  CHECK(engine::detect_sqli("1 AND sleep(5)"));
  CHECK(engine::detect_sqli("x' AND '1'='1"));
  CHECK(engine::detect_sqli("1/**/or/**/1=1"));
  CHECK(engine::detect_sqli("105 OR 1=1"));
}

TEST_CASE("detect_sqli stays quiet on benign inputs") {
  for (const char* s : {
           "hello world",
           "O'Brien",
           "it's a lovely day",
           "union station parking",
           "search for select committee",
           "John Smith",
           "2024-01-15",
           "user@example.com",
           "the quick brown fox",
           "price < 100 and in stock",
           "don't stop believing",
           "C:\\Program Files\\App",
           "SELECT name FROM products WHERE id=4",
       }) {
    CAPTURE(s);
    CHECK(!engine::detect_sqli(s));
  }
}

TEST_CASE("detect_sqli is pluggable") {
  engine::set_sqli_detector([](std::string_view) { return true; });
  CHECK(engine::detect_sqli("hello world"));
  engine::set_sqli_detector({});
  CHECK(!engine::detect_sqli("hello world"));
}

// The truth table was derived by hand, once, from the shipped rule patterns;
// every row must agree exactly.
TEST_CASE("golden corpus match bits") {
  auto rs = seclang::parse_ruleset_file(crslearn::testing::ruleset_path(),
                                        seclang::ParseMode::permissive);
  REQUIRE(rs.rules.size() == 60);

  std::ifstream in(crslearn::testing::golden_corpus_path());
  REQUIRE(in.good());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = nlohmann::json::parse(line);
    std::string payload = row.at("payload").get<std::string>();
    int rule_id = row.at("rule").get<int>();
    int expected = row.at("bit").get<int>();
    const auto* rule = rs.find(rule_id);
    REQUIRE(rule != nullptr);
    auto ctx = materialize_context(Payload{payload});
    bool got = engine::match_rule(*rule, ctx).matched;
    CAPTURE(payload);
    CAPTURE(rule_id);
    CHECK(static_cast<int>(got) == expected);
    ++rows;
  }
  CHECK(rows >= 200);
}
