// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace crslearn::engine {

// Aho-Corasick automaton behind the @pm / @pmFromFile operators:
// case-insensitive "any phrase is a substring" matching. Built once at rule
// parse time, immutable and shared read-only afterwards.
class PhraseSet {
 public:
  // Phrases are case-folded at build time; the list must be non-empty.
  explicit PhraseSet(std::vector<std::string> phrases);

  bool matches(std::string_view text) const;

  const std::vector<std::string>& phrases() const { return phrases_; }

 private:
  std::vector<std::array<std::int32_t, 256>> next_;
  std::vector<std::uint8_t> terminal_;
  std::vector<std::string> phrases_;
};

}  // namespace crslearn::engine
