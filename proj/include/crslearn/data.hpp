// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crslearn/engine.hpp"

namespace crslearn::data {

enum class Source { open_appsec, http_params, kaggle_sqli, sqlmap, other };

const char* source_name(Source source);
Source source_from_name(std::string_view name);

struct LabeledSample {
  engine::Payload payload;
  int label = 0;  // benign 0, sqli 1
  Source source = Source::other;
};

enum class Format { jsonl, csv, lines };

struct LoadOptions {
  bool strict = true;
  int lines_label = 1;            // label for the `lines` format
  Source default_source = Source::other;
};

struct LoadStats {
  std::size_t loaded = 0;
  std::size_t skipped = 0;
};

// Byte-preserving load; duplicates retained. jsonl rows carry
// {payload, label[, source]}; csv is RFC4180-ish payload,label[,source]
// with an optional header; `lines` is one payload per line. Strict mode
// throws on a malformed row naming the line, permissive skips and counts.
std::vector<LabeledSample> load_corpus(const std::string& path, Format format,
                                       const LoadOptions& options = {},
                                       LoadStats* stats = nullptr);

void export_jsonl(std::span<const LabeledSample> samples, const std::string& path);

// Seeded uniform sampling without replacement per class; output shuffled
// deterministically. Errors name the class and counts.
std::vector<LabeledSample> balanced_select(std::span<const LabeledSample> samples,
                                           std::size_t per_class, std::uint64_t seed);

struct SplitSpec {
  std::size_t train_per_class = 0;
  std::size_t test_per_class = 0;
  std::uint64_t seed = 0;
};

// Disjoint per-class-exact train/test partition, deterministic per seed.
std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split(
    std::span<const LabeledSample> samples, const SplitSpec& spec);

// Exact-payload dedup (per class), preserving first occurrence order.
std::vector<LabeledSample> dedup(std::span<const LabeledSample> samples);

std::string corpus_digest(std::span<const LabeledSample> samples);

}  // namespace crslearn::data
