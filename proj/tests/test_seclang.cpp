// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "crslearn/error.hpp"
#include "crslearn/seclang.hpp"

using namespace crslearn;
using seclang::ParseMode;

namespace {

const char* kTwoLineRule =
    "SecRule REQUEST_COOKIES|REQUEST_COOKIES_NAMES|ARGS_NAMES|ARGS|XML:/* \"@detectSQLi\" \\\n"
    "    \"id:942100,phase:2,block,capture,t:none,t:base64Decode,t:urlDecodeUni,"
    "msg:'SQL Injection Attack Detected via libinjection',tag:'paranoia-level/1',"
    "severity:'CRITICAL',setvar:'tx.sqli_score=+%{tx.critical_anomaly_score}'\"\n";

}  // namespace

TEST_CASE("two-line SecRule maps to typed fields") {
  // t:base64Decode is outside the supported set -> permissive skips it
  std::string text(kTwoLineRule);
  auto fixed = text;
  auto pos = fixed.find("t:base64Decode,");
  fixed.erase(pos, std::string("t:base64Decode,").size());

  auto rs = seclang::parse_ruleset(fixed, ParseMode::strict);
  REQUIRE(rs.rules.size() == 1);
  const auto& rule = rs.rules[0];
  CHECK(rule.id == 942100);
  CHECK(rule.paranoia_level == 1);
  CHECK(rule.severity.str() == std::string("CRITICAL"));
  CHECK(rule.severity.score() == 5);
  CHECK(rule.part.op.kind == seclang::OperatorKind::detect_sqli);
  CHECK(rule.part.targets.size() == 5);
  CHECK(rule.part.transformations.size() == 2);
  CHECK(rule.msg == "SQL Injection Attack Detected via libinjection");
}

TEST_CASE("unknown transformation: strict aborts with id and line, permissive skips") {
  std::string text(kTwoLineRule);
  try {
    seclang::parse_ruleset(text, ParseMode::strict);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(std::string(e.what()).find("942100") != std::string::npos);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    CHECK(std::string(e.what()).find("base64Decode") != std::string::npos);
  }

  auto rs = seclang::parse_ruleset(text, ParseMode::permissive);
  CHECK(rs.rules.empty());
  REQUIRE(rs.skipped.size() == 1);
  CHECK(rs.skipped[0].id == 942100);
  CHECK(rs.skipped[0].reason.find("base64Decode") != std::string::npos);
}

TEST_CASE("empty input yields empty ruleset without error") {
  auto rs = seclang::parse_ruleset("", ParseMode::strict);
  CHECK(rs.rules.empty());
  CHECK(rs.skipped.empty());
  auto rs2 = seclang::parse_ruleset("# only comments\n\nSecMarker END\n", ParseMode::strict);
  CHECK(rs2.rules.empty());
}

TEST_CASE("uncompilable regex: strict aborts, permissive records the reason") {
  std::string text =
      "SecRule ARGS \"@rx (unclosed\" \"id:1001,severity:'CRITICAL',tag:'paranoia-level/1'\"\n";
  CHECK_THROWS_AS(seclang::parse_ruleset(text, ParseMode::strict), Error);
  auto rs = seclang::parse_ruleset(text, ParseMode::permissive);
  CHECK(rs.rules.empty());
  REQUIRE(rs.skipped.size() == 1);
  CHECK(rs.skipped[0].id == 1001);
  CHECK(rs.skipped[0].reason.find("regex") != std::string::npos);
}

TEST_CASE("unknown operator: strict aborts, permissive skips") {
  std::string text =
      "SecRule ARGS \"@validateByteRange 32-126\" \"id:1002,severity:'NOTICE',tag:'paranoia-level/1'\"\n";
  CHECK_THROWS_AS(seclang::parse_ruleset(text, ParseMode::strict), Error);
  auto rs = seclang::parse_ruleset(text, ParseMode::permissive);
  REQUIRE(rs.skipped.size() == 1);
  CHECK(rs.skipped[0].reason.find("validateByteRange") != std::string::npos);
}

TEST_CASE("chain continuations fold into the parent rule") {
  std::string text =
      "SecRule ARGS \"@rx select\" \"id:2000,chain,severity:'CRITICAL',tag:'paranoia-level/2',t:lowercase\"\n"
      "# interleaved comment is fine\n"
      "SecRule ARGS \"@rx from\" \"t:lowercase\"\n";
  auto rs = seclang::parse_ruleset(text, ParseMode::strict);
  REQUIRE(rs.rules.size() == 1);
  CHECK(rs.rules[0].id == 2000);
  REQUIRE(rs.rules[0].chain.size() == 1);
  CHECK(rs.rules[0].chain[0].op.argument == "from");
}

TEST_CASE("missing paranoia-level tag defaults to PL1 with a warning") {
  std::string text = "SecRule ARGS \"@contains x\" \"id:3000,severity:'WARNING'\"\n";
  auto rs = seclang::parse_ruleset(text, ParseMode::strict);
  REQUIRE(rs.rules.size() == 1);
  CHECK(rs.rules[0].paranoia_level == 1);
  bool warned = false;
  for (const auto& w : rs.warnings) {
    if (w.id == 3000 && w.message.find("paranoia-level") != std::string::npos) warned = true;
  }
  CHECK(warned);
}

TEST_CASE("duplicate ids are rejected") {
  std::string text =
      "SecRule ARGS \"@contains a\" \"id:4000,severity:'NOTICE',tag:'paranoia-level/1'\"\n"
      "SecRule ARGS \"@contains b\" \"id:4000,severity:'NOTICE',tag:'paranoia-level/1'\"\n";
  auto rs = seclang::parse_ruleset(text, ParseMode::permissive);
  CHECK(rs.rules.size() == 1);
  REQUIRE(rs.skipped.size() == 1);
  CHECK(rs.skipped[0].reason.find("duplicate") != std::string::npos);
}

TEST_CASE("severity scores follow the CRS mapping") {
  CHECK(seclang::Severity::parse("CRITICAL")->score() == 5);
  CHECK(seclang::Severity::parse("'ERROR'").has_value() == false);  // quotes stripped upstream
  CHECK(seclang::Severity::parse("ERROR")->score() == 4);
  CHECK(seclang::Severity::parse("warning")->score() == 3);
  CHECK(seclang::Severity::parse("NOTICE")->score() == 2);
  CHECK(seclang::Severity::parse("2")->score() == 5);  // syslog numeric
}

TEST_CASE("rules_at_pl filters nested-enablement subsets") {
  std::string text;
  for (int pl = 1; pl <= 4; ++pl) {
    for (int k = 0; k < pl; ++k) {
      text += "SecRule ARGS \"@contains x\" \"id:" + std::to_string(1000 * pl + k) +
              ",severity:'NOTICE',tag:'paranoia-level/" + std::to_string(pl) + "'\"\n";
    }
  }
  auto rs = seclang::parse_ruleset(text, ParseMode::strict);
  REQUIRE(rs.rules.size() == 10);

  CHECK(seclang::rules_at_pl(rs, 1).rules.size() == 1);
  CHECK(seclang::rules_at_pl(rs, 2).rules.size() == 3);
  CHECK(seclang::rules_at_pl(rs, 3).rules.size() == 6);
  CHECK(seclang::rules_at_pl(rs, 4).rules.size() == 10);
  CHECK_THROWS_AS(seclang::rules_at_pl(rs, 0), Error);
  CHECK_THROWS_AS(seclang::rules_at_pl(rs, 5), Error);

  // monotonicity: each level's rule ids are a prefix-preserving subset
  for (int lo = 1; lo <= 4; ++lo) {
    for (int hi = lo; hi <= 4; ++hi) {
      auto rlo = seclang::rules_at_pl(rs, lo);
      auto rhi = seclang::rules_at_pl(rs, hi);
      std::size_t j = 0;
      for (const auto& rule : rlo.rules) {
        while (j < rhi.rules.size() && rhi.rules[j].id != rule.id) ++j;
        REQUIRE(j < rhi.rules.size());
      }
    }
  }
}

TEST_CASE("canonical serialization round-trips") {
  std::string text =
      "SecRule ARGS|ARGS_NAMES \"@rx (?i)union\\s+select\" "
      "\"id:5000,chain,severity:'CRITICAL',tag:'paranoia-level/2',tag:'attack-sqli',"
      "t:none,t:urlDecodeUni,t:lowercase,msg:'union select'\"\n"
      "SecRule ARGS \"@rx from\" \"t:none\"\n"
      "SecRule ARGS \"@pm sleep( benchmark(\" "
      "\"id:5001,severity:'WARNING',tag:'paranoia-level/3'\"\n"
      "SecRule ARGS \"!@rx ^[a-z]+$\" \"id:5002,severity:'NOTICE',tag:'paranoia-level/4'\"\n";
  auto rs = seclang::parse_ruleset(text, ParseMode::strict);
  REQUIRE(rs.rules.size() == 3);

  auto dumped = seclang::ruleset_to_json(rs);
  auto reparsed = seclang::ruleset_from_json(dumped);
  CHECK(rs.same_rules(reparsed));
  CHECK(seclang::ruleset_to_json(reparsed) == dumped);
}

TEST_CASE("pmFromFile resolves relative to the conf directory") {
  std::string dir = "pmfromfile_test_dir";
  std::filesystem::create_directory(dir);
  {
    std::ofstream f(dir + "/words.data");
    f << "# comment\nsleep(\nbenchmark(\n\n";
  }
  {
    std::ofstream f(dir + "/test.conf");
    f << "SecRule ARGS \"@pmFromFile words.data\" "
         "\"id:6000,severity:'CRITICAL',tag:'paranoia-level/1'\"\n";
  }
  auto rs = seclang::parse_ruleset_file(dir + "/test.conf", ParseMode::strict);
  REQUIRE(rs.rules.size() == 1);
  REQUIRE(rs.rules[0].part.op.phrases != nullptr);
  CHECK(rs.rules[0].part.op.phrases->phrases().size() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("regex rewrite table applies per (id, pattern)") {
  seclang::RewriteTable table;
  table.add(7000, "(?P<x>a)+", "(a)+");
  std::string text =
      "SecRule ARGS \"@rx (?P<x>a)+\" \"id:7000,severity:'CRITICAL',tag:'paranoia-level/1'\"\n";
  auto rs = seclang::parse_ruleset(text, ParseMode::strict, "", &table);
  REQUIRE(rs.rules.size() == 1);
  CHECK(rs.rules[0].part.op.argument == "(?P<x>a)+");
  CHECK(rs.rules[0].part.op.regex->str() == "(a)+");
}
