// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include "crslearn/data.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <unordered_set>

#include "crslearn/digest.hpp"
#include "crslearn/error.hpp"
#include "crslearn/rng.hpp"

namespace crslearn::data {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad_row(const std::string& path, std::size_t line_no,
                          const std::string& why) {
  throw Error(ErrorCode::parse_error,
              path + ":" + std::to_string(line_no) + ": " + why);
}

// RFC4180-style field split: quoted fields may contain commas and doubled
// quotes.
std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
      } else {
        current.push_back(c);
        ++i;
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
      ++i;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      ++i;
    } else {
      current.push_back(c);
      ++i;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}


std::vector<LabeledSample> pick_per_class(std::span<const LabeledSample> samples,
                                          std::size_t per_class, Rng& rng,
                                          std::size_t skip_per_class) {
  std::vector<std::size_t> pool[2];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    pool[samples[i].label ? 1 : 0].push_back(i);
  }
  for (int cls = 0; cls < 2; ++cls) {
    std::size_t need = per_class + skip_per_class;
    if (pool[cls].size() < need) {
      throw Error(ErrorCode::insufficient_samples,
                  std::string("class ") + (cls ? "sqli" : "benign") + " has " +
                      std::to_string(pool[cls].size()) + " samples, need " +
                      std::to_string(need));
    }
  }
  std::vector<LabeledSample> out;
  out.reserve(2 * per_class);
  for (int cls = 0; cls < 2; ++cls) {
    // partial Fisher-Yates: the first skip+take entries are a uniform
    // without-replacement draw
    auto& p = pool[cls];
    std::size_t take = skip_per_class + per_class;
    for (std::size_t j = 0; j < take; ++j) {
      std::size_t k = j + static_cast<std::size_t>(rng.below(p.size() - j));
      std::swap(p[j], p[k]);
    }
    for (std::size_t j = skip_per_class; j < take; ++j) {
      out.push_back(samples[p[j]]);
    }
  }
  rng.shuffle(out);
  return out;
}

}  // namespace

const char* source_name(Source source) {
  switch (source) {
    case Source::open_appsec: return "open-appsec";
    case Source::http_params: return "http-params";
    case Source::kaggle_sqli: return "kaggle-sqli";
    case Source::sqlmap: return "sqlmap";
    case Source::other: return "other";
  }
  return "other";
}

Source source_from_name(std::string_view name) {
  if (name == "open-appsec") return Source::open_appsec;
  if (name == "http-params") return Source::http_params;
  if (name == "kaggle-sqli") return Source::kaggle_sqli;
  if (name == "sqlmap") return Source::sqlmap;
  return Source::other;
}

std::vector<LabeledSample> load_corpus(const std::string& path, Format format,
                                       const LoadOptions& options, LoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open corpus: " + path);
  std::vector<LabeledSample> samples;
  LoadStats local;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    switch (format) {
      case Format::lines: {
        samples.push_back({engine::Payload{line},
                           options.lines_label ? 1 : 0, options.default_source});
        ++local.loaded;
        break;
      }
      case Format::jsonl: {
        if (line.empty()) continue;
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object() || !row.contains("payload") ||
            !row.contains("label") || !row.at("payload").is_string() ||
            !row.at("label").is_number_integer()) {
          if (options.strict) bad_row(path, line_no, "malformed jsonl row");
          ++local.skipped;
          continue;
        }
        LabeledSample s;
        s.payload.raw = row.at("payload").get<std::string>();
        s.label = row.at("label").get<int>() ? 1 : 0;
        s.source = row.contains("source")
                       ? source_from_name(row.at("source").get<std::string>())
                       : options.default_source;
        samples.push_back(std::move(s));
        ++local.loaded;
        break;
      }
      case Format::csv: {
        if (line.empty()) continue;
        auto fields = csv_fields(line);
        if (first && fields.size() >= 2 && fields[1] == "label") {
          first = false;
          continue;  // header
        }
        first = false;
        if (fields.size() < 2 ||
            (fields[1] != "0" && fields[1] != "1")) {
          if (options.strict) bad_row(path, line_no, "malformed csv row");
          ++local.skipped;
          continue;
        }
        LabeledSample s;
        s.payload.raw = fields[0];
        s.label = fields[1] == "1" ? 1 : 0;
        s.source = fields.size() > 2 ? source_from_name(fields[2])
                                     : options.default_source;
        samples.push_back(std::move(s));
        ++local.loaded;
        break;
      }
    }
  }
  if (stats) *stats = local;
  return samples;
}

void export_jsonl(std::span<const LabeledSample> samples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write corpus: " + path);
  for (const auto& s : samples) {
    json row;
    row["payload"] = s.payload.raw;
    row["label"] = s.label;
    row["source"] = source_name(s.source);
    out << row.dump() << "\n";
  }
}

std::vector<LabeledSample> balanced_select(std::span<const LabeledSample> samples,
                                           std::size_t per_class, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xba1a9ced));
  return pick_per_class(samples, per_class, rng, 0);
}

std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split(
    std::span<const LabeledSample> samples, const SplitSpec& spec) {
  // one sweep per class: the first train_per_class go to train, the next
  // test_per_class to test — disjoint by construction
  Rng rng(derive_seed(spec.seed, 0x5b117));
  std::vector<std::size_t> pool[2];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    pool[samples[i].label ? 1 : 0].push_back(i);
  }
  for (int cls = 0; cls < 2; ++cls) {
    std::size_t need = spec.train_per_class + spec.test_per_class;
    if (pool[cls].size() < need) {
      throw Error(ErrorCode::insufficient_samples,
                  std::string("class ") + (cls ? "sqli" : "benign") + " has " +
                      std::to_string(pool[cls].size()) + " samples, need " +
                      std::to_string(need));
    }
  }
  std::vector<LabeledSample> train, test;
  for (int cls = 0; cls < 2; ++cls) {
    auto& p = pool[cls];
    std::size_t take = spec.train_per_class + spec.test_per_class;
    for (std::size_t j = 0; j < take; ++j) {
      std::size_t k = j + static_cast<std::size_t>(rng.below(p.size() - j));
      std::swap(p[j], p[k]);
    }
    for (std::size_t j = 0; j < spec.train_per_class; ++j) train.push_back(samples[p[j]]);
    for (std::size_t j = 0; j < spec.test_per_class; ++j) {
      test.push_back(samples[p[spec.train_per_class + j]]);
    }
  }
  rng.shuffle(train);
  rng.shuffle(test);
  return {std::move(train), std::move(test)};
}

std::vector<LabeledSample> dedup(std::span<const LabeledSample> samples) {
  std::vector<LabeledSample> out;
  std::unordered_set<std::string> seen[2];
  for (const auto& s : samples) {
    if (seen[s.label ? 1 : 0].insert(s.payload.raw).second) out.push_back(s);
  }
  return out;
}

std::string corpus_digest(std::span<const LabeledSample> samples) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& s : samples) {
    h = fnv1a64(s.payload.raw, h);
    h = fnv1a64(s.label ? "1" : "0", h);
  }
  return hex64(h);
}

}  // namespace crslearn::data
