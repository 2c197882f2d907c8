// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>

#ifndef CRSLEARN_SOURCE_DIR
#define CRSLEARN_SOURCE_DIR "."
#endif

namespace crslearn::testing {

inline std::string repo_path(const std::string& rel) {
  return std::string(CRSLEARN_SOURCE_DIR) + "/" + rel;
}

inline std::string ruleset_path() {
  return repo_path("rules/REQUEST-942-APPLICATION-ATTACK-SQLI.conf");
}

inline std::string golden_corpus_path() {
  return repo_path("data/golden_corpus.jsonl");
}

inline std::string fixture_corpus_path() {
  return repo_path("data/fixture_corpus.jsonl");
}

}  // namespace crslearn::testing
