// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

// Default @detectSQLi heuristic. This is a deliberately small stand-in for
// libinjection: token classes plus a fixed set of fingerprints. Full SQL
// statements without a break-out construct (quote, comment, stacked query,
// logic splice) are treated as data, not injections.

#include "crslearn/sqli.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>
#include <vector>

namespace crslearn::engine {

namespace {

// Token classes:
//   s complete quoted string   q dangling quote (quote-break)
//   n number                   o operator run (text kept)
//   c comment                  ; statement separator
//   L logic keyword            U union
//   E statement keyword        f attack function name
//   k other SQL keyword        v @-variable
//   x bareword                 ( ) , punctuation
struct Token {
  char cls;
  std::string text;
};

const std::unordered_set<std::string>& logic_keywords() {
  static const std::unordered_set<std::string> s = {"or", "and", "xor"};
  return s;
}

const std::unordered_set<std::string>& statement_keywords() {
  static const std::unordered_set<std::string> s = {
      "select", "insert", "update", "delete", "drop",     "exec",
      "execute", "truncate", "create", "alter", "grant",  "revoke",
      "shutdown", "declare", "waitfor", "merge", "call",  "rename",
  };
  return s;
}

const std::unordered_set<std::string>& attack_functions() {
  static const std::unordered_set<std::string> s = {
      "sleep",        "benchmark",  "pg_sleep",     "load_file",
      "xp_cmdshell",  "extractvalue", "updatexml",  "receive_message",
      "randomblob",   "make_set",   "elt",          "get_lock",
  };
  return s;
}

const std::unordered_set<std::string>& other_keywords() {
  static const std::unordered_set<std::string> s = {
      "from",   "where",  "table",   "database", "values", "into",
      "having", "group",  "order",   "by",       "like",   "between",
      "case",   "when",   "then",    "else",     "end",    "limit",
      "offset", "join",   "inner",   "outer",    "left",   "right",
      "on",     "as",     "distinct", "all",     "null",   "is",
      "in",     "exists", "cast",    "convert",  "concat", "char",
      "chr",    "ascii",  "substring", "substr", "mid",    "version",
      "user",   "schema", "if",      "ifnull",   "not",    "set",
      "information_schema", "sysobjects", "dual", "union_select",
  };
  return s;
}

inline bool word_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c == '@';
}

inline bool word_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c == '@';
}

inline bool op_char(unsigned char c) {
  return c == '=' || c == '<' || c == '>' || c == '!' || c == '~' ||
         c == '+' || c == '-' || c == '*' || c == '/' || c == '%' ||
         c == '^' || c == '|' || c == '&';
}

std::string fold(std::string_view in) {
  std::string out(in);
  for (auto& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Token> tokenize(std::string_view in) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = in.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(in[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '\'' || c == '"' || c == '`') {
      // complete string, or a dangling quote-break token
      std::size_t j = i + 1;
      while (j < n) {
        if (in[j] == '\\' && j + 1 < n) {
          j += 2;
          continue;
        }
        if (static_cast<unsigned char>(in[j]) == c) break;
        ++j;
      }
      if (j < n) {
        tokens.push_back({'s', std::string(in.substr(i + 1, j - i - 1))});
        i = j + 1;
      } else {
        tokens.push_back({'q', std::string(1, in[i])});
        ++i;
      }
      continue;
    }
    if (c == '-' && i + 1 < n && in[i + 1] == '-') {
      tokens.push_back({'c', std::string(in.substr(i))});
      break;
    }
    if (c == '#') {
      tokens.push_back({'c', std::string(in.substr(i))});
      break;
    }
    if (c == '/' && i + 1 < n && in[i + 1] == '*') {
      std::size_t end = in.find("*/", i + 2);
      std::size_t stop = end == std::string_view::npos ? n : end + 2;
      tokens.push_back({'c', std::string(in.substr(i, stop - i))});
      i = stop;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i + 1;
      if (c == '0' && j < n && (in[j] == 'x' || in[j] == 'X')) {
        ++j;
        while (j < n && std::isxdigit(static_cast<unsigned char>(in[j]))) ++j;
      } else {
        while (j < n && (std::isdigit(static_cast<unsigned char>(in[j])) || in[j] == '.')) ++j;
      }
      tokens.push_back({'n', std::string(in.substr(i, j - i))});
      i = j;
      continue;
    }
    if (word_start(c)) {
      std::size_t j = i + 1;
      while (j < n && word_char(static_cast<unsigned char>(in[j]))) ++j;
      std::string w = fold(in.substr(i, j - i));
      char cls = 'x';
      if (w[0] == '@') cls = 'v';
      else if (logic_keywords().count(w)) cls = 'L';
      else if (w == "union") cls = 'U';
      else if (statement_keywords().count(w)) cls = 'E';
      else if (attack_functions().count(w)) cls = 'f';
      else if (other_keywords().count(w)) cls = 'k';
      tokens.push_back({cls, std::move(w)});
      i = j;
      continue;
    }
    if (op_char(c)) {
      std::size_t j = i + 1;
      while (j < n && op_char(static_cast<unsigned char>(in[j]))) ++j;
      tokens.push_back({'o', std::string(in.substr(i, j - i))});
      i = j;
      continue;
    }
    if (c == ';' || c == '(' || c == ')' || c == ',') {
      tokens.push_back({static_cast<char>(c), std::string(1, in[i])});
      ++i;
      continue;
    }
    // anything else is separator noise
    ++i;
  }

  // Comments are transparent for fingerprinting (SELECT/**/FROM) unless
  // they directly follow a quote-break, which is itself a pattern.
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (auto& t : tokens) {
    if (t.cls == 'c' && !(!out.empty() && out.back().cls == 'q')) {
      if (&t != &tokens.back()) continue;
      if (out.empty() || (out.back().cls != 'q' && out.back().cls != 's' &&
                          out.back().cls != 'n' && out.back().cls != 'x'))
        continue;
    }
    out.push_back(std::move(t));
  }
  return out;
}

bool value_class(char c) {
  return c == 's' || c == 'q' || c == 'n';
}

bool suspicious(const std::vector<Token>& tokens) {
  const std::size_t n = tokens.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char b = tokens[i].cls;
    const char a = i > 0 ? tokens[i - 1].cls : '^';
    const char c = i + 1 < n ? tokens[i + 1].cls : '$';

    // value OR value: "1' or '1", "1 and 1", "' || 'a"
    if (b == 'L' && value_class(a) && (value_class(c) || c == 'v' || c == '(')) return true;
    // union select / union all select / union(select
    if (b == 'U' && (c == 'E' || c == '(' ||
                     (i + 1 < n && (tokens[i + 1].text == "all" ||
                                    tokens[i + 1].text == "distinct"))))
      return true;
    // quote-break straight into a comment: "admin'--"
    if (b == 'q' && c == 'c') return true;
    // quote-break into logic or statement keyword: "' or 1", "'; select"
    if (b == 'q' && (c == 'L' || c == 'E' || c == 'U')) return true;
    // stacked query: "; drop table"
    if (b == ';' && (c == 'E' || c == 'U')) return true;
    // attack function call: sleep(, benchmark(
    if (b == 'f' && c == '(') return true;
    // string-comparison tautology: 'a'='a, 'a' like 'a, '1'||'1
    if (value_class(a) && a != 'n' && b == 'o' && (value_class(c) && c != 'n') &&
        (tokens[i].text.find('=') != std::string::npos ||
         tokens[i].text.find("||") != std::string::npos))
      return true;
    if (value_class(a) && a != 'n' && b == 'k' && tokens[i].text == "like" &&
        value_class(c))
      return true;
  }
  return false;
}

SqliDetector& detector_slot() {
  static SqliDetector detector;
  return detector;
}

}  // namespace

bool default_detect_sqli(std::string_view value) {
  if (suspicious(tokenize(value))) return true;
  // re-evaluate as the continuation of a single-quoted string
  if (value.find('\'') != std::string_view::npos) {
    std::string quoted;
    quoted.reserve(value.size() + 1);
    quoted.push_back('\'');
    quoted.append(value);
    if (suspicious(tokenize(quoted))) return true;
  }
  return false;
}

std::string sqli_fingerprint(std::string_view value) {
  std::string out;
  for (const auto& t : tokenize(value)) out.push_back(t.cls);
  return out;
}

void set_sqli_detector(SqliDetector detector) {
  detector_slot() = std::move(detector);
}

bool detect_sqli(std::string_view value) {
  const auto& d = detector_slot();
  return d ? d(value) : default_detect_sqli(value);
}

}  // namespace crslearn::engine
