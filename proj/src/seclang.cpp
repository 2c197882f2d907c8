// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

// SecLang subset parser. Supported surface: SecRule directives with the
// selector, operator and action sets documented in the README; everything
// else in a .conf file (comments, markers, SecAction and friends) is
// skipped. Chained SecRules fold into one logical rule with AND semantics.

#include "crslearn/seclang.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "crslearn/digest.hpp"
#include "crslearn/error.hpp"

namespace crslearn::seclang {

namespace {

using json = nlohmann::ordered_json;

std::string to_upper(std::string_view in) {
  std::string out(in);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view in) {
  std::size_t b = 0, e = in.size();
  while (b < e && std::isspace(static_cast<unsigned char>(in[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(in[e - 1]))) --e;
  return std::string(in.substr(b, e - b));
}

struct LogicalLine {
  std::string text;
  int line_no;  // first physical line
};

// Joins trailing-backslash continuations; CRS rule files lean on them
// heavily, including inside quoted action strings.
std::vector<LogicalLine> logical_lines(std::string_view text) {
  std::vector<LogicalLine> out;
  std::string current;
  int start_line = 1;
  int line_no = 1;
  bool joining = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!joining) start_line = line_no;
    if (!line.empty() && line.back() == '\\') {
      current.append(line.substr(0, line.size() - 1));
      joining = true;
    } else {
      current.append(line);
      out.push_back({std::move(current), start_line});
      current.clear();
      joining = false;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
    ++line_no;
  }
  if (joining) out.push_back({std::move(current), start_line});
  return out;
}

// Whitespace-separated arguments with double-quote grouping; inside quotes
// only \" is an escape, every other backslash passes through verbatim
// (regex patterns depend on that).
std::vector<std::string> split_args(std::string_view line) {
  std::vector<std::string> args;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= n) break;
    std::string arg;
    if (line[i] == '"') {
      ++i;
      while (i < n && line[i] != '"') {
        if (line[i] == '\\' && i + 1 < n && line[i + 1] == '"') {
          arg.push_back('"');
          i += 2;
        } else {
          arg.push_back(line[i]);
          ++i;
        }
      }
      if (i < n) ++i;  // closing quote
    } else {
      while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) {
        arg.push_back(line[i]);
        ++i;
      }
    }
    args.push_back(std::move(arg));
  }
  return args;
}

// Comma-separated actions; single quotes protect commas inside values.
std::vector<std::string> split_actions(std::string_view text) {
  std::vector<std::string> items;
  std::string current;
  bool in_quote = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\'' && (i == 0 || text[i - 1] != '\\')) in_quote = !in_quote;
    if (c == ',' && !in_quote) {
      items.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  std::string last = trim(current);
  if (!last.empty()) items.push_back(std::move(last));
  std::erase_if(items, [](const std::string& s) { return s.empty(); });
  return items;
}

std::string unquote_value(std::string_view v) {
  if (v.size() >= 2 && v.front() == '\'' && v.back() == '\'') {
    return std::string(v.substr(1, v.size() - 2));
  }
  return std::string(v);
}

// Actions interpreted by this artifact; the rest of the directive's action
// list is rule-engine behavior (flow control, logging, setvar bookkeeping)
// that has no bearing on match bits.
const std::set<std::string>& ignorable_actions() {
  static const std::set<std::string> s = {
      "phase",      "block",     "pass",      "deny",       "allow",
      "capture",    "log",       "nolog",     "auditlog",   "noauditlog",
      "logdata",    "status",    "setvar",    "ver",        "rev",
      "accuracy",   "maturity",  "multiMatch", "multimatch", "ctl",
      "sanitiseArg", "sanitiseMatched", "sanitiseMatchedBytes",
      "skip",       "skipAfter", "expirevar", "initcol",    "setenv",
      "exec",       "prepend",   "append",    "xmlns",
  };
  return s;
}

struct ParsedActions {
  std::optional<int> id;
  std::optional<Severity> severity;
  std::string msg;
  std::vector<std::string> tags;
  std::vector<std::string> transform_names;
  bool chain = false;
  std::vector<std::string> unknown;
};

ParsedActions parse_actions(std::string_view text) {
  ParsedActions out;
  for (const auto& item : split_actions(text)) {
    std::size_t colon = item.find(':');
    std::string key = colon == std::string::npos ? item : item.substr(0, colon);
    std::string value =
        colon == std::string::npos ? "" : unquote_value(trim(item.substr(colon + 1)));
    if (key == "id") {
      try {
        out.id = std::stoi(value);
      } catch (...) {
      }
    } else if (key == "severity") {
      out.severity = Severity::parse(value);
      if (!out.severity) out.unknown.push_back(item);
    } else if (key == "msg") {
      out.msg = value;
    } else if (key == "tag") {
      out.tags.push_back(value);
    } else if (key == "t") {
      out.transform_names.push_back(value);
    } else if (key == "chain") {
      out.chain = true;
    } else if (!ignorable_actions().count(key)) {
      out.unknown.push_back(item);
    }
  }
  return out;
}

std::optional<int> paranoia_level_from_tags(const std::vector<std::string>& tags) {
  for (const auto& tag : tags) {
    constexpr std::string_view prefix = "paranoia-level/";
    if (tag.rfind(prefix, 0) == 0) {
      try {
        int pl = std::stoi(tag.substr(prefix.size()));
        if (pl >= 1 && pl <= 4) return pl;
      } catch (...) {
      }
    }
  }
  return std::nullopt;
}

std::vector<std::string> load_phrase_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io_error, "cannot open phrase file: " + path);
  }
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    phrases.push_back(std::move(t));
  }
  return phrases;
}

// Thrown internally while assembling one rule; converted to a skip entry or
// re-thrown with id/line context depending on the parse mode.
struct RuleReject {
  std::string reason;
};

Operator parse_operator(std::string_view text, const std::string& base_dir,
                        const RewriteTable* rewrites, int rule_id) {
  Operator op;
  std::string_view rest = text;
  if (!rest.empty() && rest.front() == '!') {
    op.negated = true;
    rest.remove_prefix(1);
  }
  std::string name = "rx";  // bare operator argument means @rx
  if (!rest.empty() && rest.front() == '@') {
    std::size_t sp = rest.find(' ');
    name = std::string(rest.substr(1, sp == std::string_view::npos ? rest.size() - 1 : sp - 1));
    rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
  }

  if (name == "rx") {
    op.kind = OperatorKind::rx;
    op.argument = std::string(rest);
    std::string pattern = op.argument;
    if (rewrites) {
      if (auto rewritten = rewrites->lookup(rule_id, pattern)) pattern = *rewritten;
    }
    try {
      op.regex = std::make_shared<const boost::regex>(pattern, boost::regex::perl);
    } catch (const boost::regex_error& e) {
      throw RuleReject{"regex does not compile: " + std::string(e.what())};
    }
  } else if (name == "pm") {
    op.kind = OperatorKind::pm;
    op.argument = std::string(rest);
    std::vector<std::string> phrases;
    std::istringstream iss{op.argument};
    std::string w;
    while (iss >> w) phrases.push_back(w);
    if (phrases.empty()) throw RuleReject{"@pm with empty phrase list"};
    op.phrases = std::make_shared<const engine::PhraseSet>(std::move(phrases));
  } else if (name == "pmFromFile" || name == "pmf") {
    op.kind = OperatorKind::pm_from_file;
    op.argument = trim(rest);
    std::filesystem::path p{op.argument};
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    try {
      auto phrases = load_phrase_file(p.string());
      if (phrases.empty()) throw RuleReject{"@pmFromFile with empty phrase list"};
      op.phrases = std::make_shared<const engine::PhraseSet>(std::move(phrases));
    } catch (const Error& e) {
      throw RuleReject{e.what()};
    }
  } else if (name == "detectSQLi") {
    op.kind = OperatorKind::detect_sqli;
  } else if (name == "contains") {
    op.kind = OperatorKind::contains;
    op.argument = std::string(rest);
  } else {
    throw RuleReject{"unknown operator: @" + name};
  }
  return op;
}

std::vector<TargetSelector> parse_targets(std::string_view text,
                                          std::vector<std::string>* dropped) {
  std::vector<TargetSelector> targets;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t bar = text.find('|', pos);
    std::string_view item = bar == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, bar - pos);
    pos = bar == std::string_view::npos ? text.size() + 1 : bar + 1;
    std::string t = trim(item);
    if (t.empty()) continue;
    TargetSelector sel;
    std::string_view sv = t;
    if (sv.front() == '!') {
      sel.exclude = true;
      sv.remove_prefix(1);
    }
    if (!sv.empty() && sv.front() == '&') {
      dropped->push_back(t + " (count selectors unsupported)");
      continue;
    }
    std::size_t colon = sv.find(':');
    std::string name(colon == std::string_view::npos ? sv : sv.substr(0, colon));
    if (colon != std::string_view::npos) sel.member = std::string(sv.substr(colon + 1));
    auto kind = selector_from_name(name);
    if (!kind) {
      dropped->push_back(t + " (unsupported selector)");
      continue;
    }
    sel.kind = *kind;
    targets.push_back(std::move(sel));
  }
  return targets;
}

std::vector<engine::Transform> parse_transforms(const std::vector<std::string>& names) {
  std::vector<engine::Transform> out;
  out.reserve(names.size());
  for (const auto& name : names) {
    try {
      out.push_back(engine::transform_from_name(name));
    } catch (const Error&) {
      throw RuleReject{"unknown transformation: " + name};
    }
  }
  return out;
}

json operator_to_json(const Operator& op) {
  json j;
  j["kind"] = operator_kind_name(op.kind);
  j["negated"] = op.negated;
  j["argument"] = op.argument;
  if (op.kind == OperatorKind::rx && op.regex &&
      op.regex->str() != op.argument) {
    j["compiled_pattern"] = op.regex->str();
  }
  if (op.phrases) j["phrases"] = op.phrases->phrases();
  return j;
}

json part_to_json(const RulePart& part) {
  json j;
  json targets = json::array();
  for (const auto& t : part.targets) {
    json tj;
    tj["kind"] = selector_name(t.kind);
    if (!t.member.empty()) tj["member"] = t.member;
    if (t.exclude) tj["exclude"] = true;
    targets.push_back(std::move(tj));
  }
  j["targets"] = std::move(targets);
  json transforms = json::array();
  for (auto t : part.transformations) transforms.push_back(engine::transform_name(t));
  j["transformations"] = std::move(transforms);
  j["operator"] = operator_to_json(part.op);
  return j;
}

Operator operator_from_json(const json& j) {
  Operator op;
  std::string kind = j.at("kind").get<std::string>();
  op.negated = j.value("negated", false);
  op.argument = j.value("argument", std::string{});
  if (kind == "rx") {
    op.kind = OperatorKind::rx;
    std::string pattern = j.value("compiled_pattern", op.argument);
    op.regex = std::make_shared<const boost::regex>(pattern, boost::regex::perl);
  } else if (kind == "pm" || kind == "pmFromFile") {
    op.kind = kind == "pm" ? OperatorKind::pm : OperatorKind::pm_from_file;
    auto phrases = j.at("phrases").get<std::vector<std::string>>();
    op.phrases = std::make_shared<const engine::PhraseSet>(std::move(phrases));
  } else if (kind == "detectSQLi") {
    op.kind = OperatorKind::detect_sqli;
  } else if (kind == "contains") {
    op.kind = OperatorKind::contains;
  } else {
    throw Error(ErrorCode::format_error, "unknown operator kind: " + kind);
  }
  return op;
}

RulePart part_from_json(const json& j) {
  RulePart part;
  for (const auto& tj : j.at("targets")) {
    TargetSelector sel;
    auto kind = selector_from_name(tj.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::format_error, "unknown selector kind");
    sel.kind = *kind;
    sel.member = tj.value("member", std::string{});
    sel.exclude = tj.value("exclude", false);
    part.targets.push_back(std::move(sel));
  }
  for (const auto& t : j.at("transformations")) {
    part.transformations.push_back(engine::transform_from_name(t.get<std::string>()));
  }
  part.op = operator_from_json(j.at("operator"));
  return part;
}

}  // namespace

std::optional<Severity> Severity::parse(std::string_view text) {
  std::string u = to_upper(trim(text));
  if (u == "CRITICAL") return Severity{SeverityName::critical};
  if (u == "ERROR") return Severity{SeverityName::error};
  if (u == "WARNING") return Severity{SeverityName::warning};
  if (u == "NOTICE") return Severity{SeverityName::notice};
  // numeric syslog levels as ModSecurity accepts them (2=CRITICAL..5=NOTICE;
  // distinct from the anomaly scores these map to)
  if (u == "2") return Severity{SeverityName::critical};
  if (u == "3") return Severity{SeverityName::error};
  if (u == "4") return Severity{SeverityName::warning};
  if (u == "5") return Severity{SeverityName::notice};
  return std::nullopt;
}

const char* selector_name(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::args: return "ARGS";
    case SelectorKind::args_names: return "ARGS_NAMES";
    case SelectorKind::request_cookies: return "REQUEST_COOKIES";
    case SelectorKind::request_cookies_names: return "REQUEST_COOKIES_NAMES";
    case SelectorKind::request_headers: return "REQUEST_HEADERS";
    case SelectorKind::request_body: return "REQUEST_BODY";
    case SelectorKind::request_uri: return "REQUEST_URI";
    case SelectorKind::xml: return "XML";
  }
  return "ARGS";
}

std::optional<SelectorKind> selector_from_name(std::string_view name) {
  std::string u = to_upper(name);
  if (u == "ARGS") return SelectorKind::args;
  if (u == "ARGS_NAMES") return SelectorKind::args_names;
  if (u == "REQUEST_COOKIES") return SelectorKind::request_cookies;
  if (u == "REQUEST_COOKIES_NAMES") return SelectorKind::request_cookies_names;
  if (u == "REQUEST_HEADERS") return SelectorKind::request_headers;
  if (u == "REQUEST_BODY") return SelectorKind::request_body;
  if (u == "REQUEST_URI") return SelectorKind::request_uri;
  if (u == "XML") return SelectorKind::xml;
  return std::nullopt;
}

const char* operator_kind_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::rx: return "rx";
    case OperatorKind::pm: return "pm";
    case OperatorKind::pm_from_file: return "pmFromFile";
    case OperatorKind::detect_sqli: return "detectSQLi";
    case OperatorKind::contains: return "contains";
  }
  return "rx";
}

const Rule* RuleSet::find(int id) const {
  for (const auto& r : rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

bool RuleSet::same_rules(const RuleSet& other) const {
  return rules == other.rules && source_digest == other.source_digest;
}

RewriteTable RewriteTable::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open rewrite table: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

RewriteTable RewriteTable::from_json_text(std::string_view text) {
  RewriteTable table;
  json doc = json::parse(text);
  for (const auto& entry : doc.at("rewrites")) {
    table.add(entry.at("id").get<int>(), entry.at("original").get<std::string>(),
              entry.at("replacement").get<std::string>());
  }
  return table;
}

void RewriteTable::add(int rule_id, std::string original, std::string replacement) {
  entries_[{rule_id, std::move(original)}] = std::move(replacement);
}

std::optional<std::string> RewriteTable::lookup(int rule_id,
                                                std::string_view pattern) const {
  auto it = entries_.find(std::make_pair(rule_id, std::string(pattern)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

RuleSet parse_ruleset(std::string_view conf_text, ParseMode mode,
                      const std::string& base_dir, const RewriteTable* rewrites) {
  RuleSet out;
  out.source_digest = digest_hex(conf_text);

  struct Draft {
    Rule rule;
    int line = 0;
    bool expecting_chain = false;
    std::vector<std::string> dropped_targets;
  };
  std::optional<Draft> draft;
  std::set<int> seen_ids;

  auto reject = [&](int id, int line, const std::string& reason) {
    if (mode == ParseMode::strict) {
      throw Error(ErrorCode::parse_error, "rule " + std::to_string(id) + " (line " +
                                              std::to_string(line) + "): " + reason);
    }
    out.skipped.push_back({id, line, reason});
  };

  auto finalize = [&](Draft&& d) {
    for (const auto& dropped : d.dropped_targets) {
      out.warnings.push_back({d.rule.id, d.line, "dropped target " + dropped});
    }
    if (seen_ids.count(d.rule.id)) {
      reject(d.rule.id, d.line, "duplicate rule id");
      return;
    }
    seen_ids.insert(d.rule.id);
    out.rules.push_back(std::move(d.rule));
  };

  for (const auto& [text, line_no] : logical_lines(conf_text)) {
    std::string line = trim(text);
    if (line.empty() || line[0] == '#') continue;

    std::size_t sp = line.find_first_of(" \t");
    std::string directive = line.substr(0, sp);
    if (directive != "SecRule") {
      // SecMarker, SecAction, SecComponentSignature, ... — not detection
      // rules; a pending chain cannot continue across them.
      if (draft && draft->expecting_chain) {
        reject(draft->rule.id, draft->line, "chain continuation missing");
        draft.reset();
      }
      continue;
    }

    auto args = split_args(sp == std::string::npos ? std::string_view{}
                                                   : std::string_view(line).substr(sp));
    if (args.size() < 2) {
      reject(0, line_no, "SecRule with fewer than two arguments");
      continue;
    }
    const std::string& variables = args[0];
    const std::string& op_text = args[1];
    const std::string actions_text = args.size() > 2 ? args[2] : std::string{};

    ParsedActions actions = parse_actions(actions_text);
    bool is_continuation = draft && draft->expecting_chain;

    int ctx_id = is_continuation ? draft->rule.id : actions.id.value_or(0);
    try {
      RulePart part;
      std::vector<std::string> dropped;
      part.targets = parse_targets(variables, &dropped);
      if (part.targets.empty()) throw RuleReject{"no supported target selectors"};
      part.transformations = parse_transforms(actions.transform_names);
      part.op = parse_operator(op_text, base_dir, rewrites, ctx_id);

      for (const auto& unknown : actions.unknown) {
        out.warnings.push_back({ctx_id, line_no, "ignored action " + unknown});
      }

      if (is_continuation) {
        draft->rule.chain.push_back(std::move(part));
        draft->dropped_targets.insert(draft->dropped_targets.end(), dropped.begin(),
                                      dropped.end());
        draft->expecting_chain = actions.chain;
        if (!draft->expecting_chain) {
          finalize(std::move(*draft));
          draft.reset();
        }
        continue;
      }

      if (!actions.id) throw RuleReject{"SecRule without id action"};

      Draft d;
      d.rule.id = *actions.id;
      d.line = line_no;
      d.rule.msg = actions.msg;
      d.rule.tags = actions.tags;
      d.dropped_targets = std::move(dropped);
      if (auto pl = paranoia_level_from_tags(actions.tags)) {
        d.rule.paranoia_level = *pl;
      } else {
        d.rule.paranoia_level = 1;
        out.warnings.push_back({d.rule.id, line_no, "no paranoia-level tag, defaulting to PL1"});
      }
      if (!actions.severity) throw RuleReject{"scoring rule without severity"};
      d.rule.severity = *actions.severity;
      d.rule.part = std::move(part);
      d.expecting_chain = actions.chain;
      if (d.expecting_chain) {
        draft = std::move(d);
      } else {
        finalize(std::move(d));
      }
    } catch (const RuleReject& r) {
      reject(ctx_id, line_no, r.reason);
      if (is_continuation) draft.reset();
    }
  }
  if (draft && draft->expecting_chain) {
    reject(draft->rule.id, draft->line, "chain continuation missing at end of file");
  }
  return out;
}

RuleSet parse_ruleset_file(const std::string& path, ParseMode mode,
                           const RewriteTable* rewrites) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open ruleset: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string base_dir = std::filesystem::path(path).parent_path().string();
  return parse_ruleset(ss.str(), mode, base_dir, rewrites);
}

RuleSet rules_at_pl(const RuleSet& ruleset, int pl) {
  if (pl < 1 || pl > 4) {
    throw Error(ErrorCode::invalid_argument,
                "paranoia level out of range: " + std::to_string(pl));
  }
  RuleSet out;
  out.source_digest = digest_hex(ruleset.source_digest + ":pl" + std::to_string(pl));
  for (const auto& rule : ruleset.rules) {
    if (rule.paranoia_level <= pl) out.rules.push_back(rule);
  }
  return out;
}

std::string ruleset_to_json(const RuleSet& ruleset) {
  json doc;
  doc["format"] = "crs-learn-ruleset";
  doc["version"] = 1;
  doc["source_digest"] = ruleset.source_digest;
  json rules = json::array();
  for (const auto& rule : ruleset.rules) {
    json rj;
    rj["id"] = rule.id;
    rj["paranoia_level"] = rule.paranoia_level;
    rj["severity"] = rule.severity.str();
    if (!rule.msg.empty()) rj["msg"] = rule.msg;
    rj["tags"] = rule.tags;
    rj["part"] = part_to_json(rule.part);
    if (!rule.chain.empty()) {
      json chain = json::array();
      for (const auto& part : rule.chain) chain.push_back(part_to_json(part));
      rj["chain"] = std::move(chain);
    }
    rules.push_back(std::move(rj));
  }
  doc["rules"] = std::move(rules);
  return doc.dump(2);
}

RuleSet ruleset_from_json(std::string_view json_text) {
  RuleSet out;
  json doc = json::parse(json_text);
  if (doc.value("format", std::string{}) != "crs-learn-ruleset") {
    throw Error(ErrorCode::format_error, "not a crs-learn ruleset document");
  }
  out.source_digest = doc.value("source_digest", std::string{});
  for (const auto& rj : doc.at("rules")) {
    Rule rule;
    rule.id = rj.at("id").get<int>();
    rule.paranoia_level = rj.at("paranoia_level").get<int>();
    auto sev = Severity::parse(rj.at("severity").get<std::string>());
    if (!sev) throw Error(ErrorCode::format_error, "bad severity");
    rule.severity = *sev;
    rule.msg = rj.value("msg", std::string{});
    rule.tags = rj.value("tags", std::vector<std::string>{});
    rule.part = part_from_json(rj.at("part"));
    if (rj.contains("chain")) {
      for (const auto& pj : rj.at("chain")) rule.chain.push_back(part_from_json(pj));
    }
    out.rules.push_back(std::move(rule));
  }
  return out;
}

}  // namespace crslearn::seclang
