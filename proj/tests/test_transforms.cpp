// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "crslearn/error.hpp"
#include "crslearn/rng.hpp"
#include "crslearn/transforms.hpp"

using namespace crslearn;
using engine::Transform;

namespace {
std::string tx(std::string_view value, std::vector<std::string> names) {
  return engine::transform(value, names);
}
}  // namespace

TEST_CASE("urlDecode + lowercase") {
  CHECK(tx("A%27%20OR%201", {"urlDecode", "lowercase"}) == "a' or 1");
  CHECK(tx("a+b", {"urlDecode"}) == "a b");
  // invalid escapes pass through unchanged
  CHECK(tx("100%zz%4", {"urlDecode"}) == "100%zz%4");
  CHECK(tx("%g1abc%", {"urlDecode"}) == "%g1abc%");
}

TEST_CASE("urlDecodeUni handles %uXXXX") {
  CHECK(tx("%u0041", {"urlDecodeUni"}) == "A");
  // fullwidth ASCII maps back onto ASCII
  CHECK(tx("%uFF07", {"urlDecodeUni"}) == "'");
  CHECK(tx("%u00e9", {"urlDecodeUni"}) == "\xe9");
  CHECK(tx("%uZZZZ", {"urlDecodeUni"}) == "%uZZZZ");
  CHECK(tx("%41", {"urlDecodeUni"}) == "A");
}

TEST_CASE("comment transforms") {
  CHECK(tx("1/*x*/OR/*y*/2", {"replaceComments"}) == "1 OR 2");
  CHECK(tx("1/*unterminated", {"replaceComments"}) == "1 ");
  CHECK(tx("a*/b", {"replaceComments"}) == "a*/b");
  CHECK(tx("1/*x*/2--rest", {"removeComments"}) == "12");
  CHECK(tx("a#comment", {"removeComments"}) == "a");
}

TEST_CASE("whitespace transforms") {
  CHECK(tx("a \t\n b", {"compressWhitespace"}) == "a b");
  CHECK(tx(" a  b ", {"removeWhitespace"}) == "ab");
}

TEST_CASE("htmlEntityDecode") {
  CHECK(tx("&lt;s&gt;&amp;&quot;", {"htmlEntityDecode"}) == "<s>&\"");
  CHECK(tx("&#39;&#x27;", {"htmlEntityDecode"}) == "''");
  CHECK(tx("&#65", {"htmlEntityDecode"}) == "A");
  CHECK(tx("&unknown;", {"htmlEntityDecode"}) == "&unknown;");
}

TEST_CASE("utf8toUnicode") {
  CHECK(tx("abc 123", {"utf8toUnicode"}) == "abc 123");
  CHECK(tx("caf\xc3\xa9", {"utf8toUnicode"}) == "caf%u00E9");
  CHECK(tx("\xe2\x80\x99", {"utf8toUnicode"}) == "%u2019");
  // stray continuation byte passes through
  CHECK(tx("a\xa9b", {"utf8toUnicode"}) == "a\xa9b");
}

TEST_CASE("removeNulls") {
  std::string with_null = std::string("a") + '\0' + "b";
  CHECK(tx(with_null, {"removeNulls"}) == "ab");
}

TEST_CASE("none resets the accumulated chain") {
  CHECK(tx("A%27", {"lowercase", "none"}) == "A%27");
  CHECK(tx("A%27", {"urlDecode", "none", "lowercase"}) == "a%27");
  for (const char* s : {"", "abc", "A%20b", "' OR 1"}) {
    CHECK(tx(s, {"none"}) == s);
  }
}

TEST_CASE("unknown transformation name throws") {
  CHECK_THROWS_AS(tx("x", {"base64Decode"}), Error);
  try {
    tx("x", {"noSuchThing"});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported_transformation);
    CHECK(std::string(e.what()).find("noSuchThing") != std::string::npos);
  }
}

TEST_CASE("definitional idempotence on random strings") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    std::size_t len = rng.below(40);
    for (std::size_t i = 0; i < len; ++i) {
      s.push_back(static_cast<char>(rng.below(96) + 32));
    }
    auto once_lc = tx(s, {"lowercase"});
    CHECK(tx(once_lc, {"lowercase"}) == once_lc);
    auto once_cw = tx(s, {"compressWhitespace"});
    CHECK(tx(once_cw, {"compressWhitespace"}) == once_cw);
    auto once_rw = tx(s, {"removeWhitespace"});
    CHECK(tx(once_rw, {"removeWhitespace"}) == once_rw);
  }
}
