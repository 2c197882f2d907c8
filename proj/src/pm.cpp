// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include "crslearn/pm.hpp"

#include <cctype>
#include <deque>

#include "crslearn/error.hpp"

namespace crslearn::engine {

namespace {

inline unsigned char fold(unsigned char c) {
  return static_cast<unsigned char>(std::tolower(c));
}

}  // namespace

PhraseSet::PhraseSet(std::vector<std::string> phrases)
    : phrases_(std::move(phrases)) {
  if (phrases_.empty()) {
    throw Error(ErrorCode::invalid_argument, "@pm phrase list is empty");
  }
  for (auto& p : phrases_) {
    for (auto& c : p) c = static_cast<char>(fold(static_cast<unsigned char>(c)));
  }

  // Trie construction; state 0 is the root.
  next_.emplace_back();
  next_.back().fill(-1);
  terminal_.push_back(0);
  for (const auto& p : phrases_) {
    std::int32_t state = 0;
    for (unsigned char c : p) {
      if (next_[static_cast<std::size_t>(state)][c] < 0) {
        next_[static_cast<std::size_t>(state)][c] =
            static_cast<std::int32_t>(next_.size());
        next_.emplace_back();
        next_.back().fill(-1);
        terminal_.push_back(0);
      }
      state = next_[static_cast<std::size_t>(state)][c];
    }
    terminal_[static_cast<std::size_t>(state)] = 1;
  }

  // BFS over failure links, resolving the goto function into a dense
  // transition table; terminal flags propagate along failures so matching
  // is a single table walk.
  std::vector<std::int32_t> fail(next_.size(), 0);
  std::deque<std::int32_t> queue;
  for (int c = 0; c < 256; ++c) {
    std::int32_t s = next_[0][static_cast<std::size_t>(c)];
    if (s < 0) {
      next_[0][static_cast<std::size_t>(c)] = 0;
    } else {
      fail[static_cast<std::size_t>(s)] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    std::int32_t u = queue.front();
    queue.pop_front();
    std::int32_t f = fail[static_cast<std::size_t>(u)];
    if (terminal_[static_cast<std::size_t>(f)]) terminal_[static_cast<std::size_t>(u)] = 1;
    for (int c = 0; c < 256; ++c) {
      std::int32_t v = next_[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)];
      if (v < 0) {
        next_[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)] =
            next_[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)];
      } else {
        fail[static_cast<std::size_t>(v)] = next_[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)];
        queue.push_back(v);
      }
    }
  }
}

bool PhraseSet::matches(std::string_view text) const {
  std::int32_t state = 0;
  for (unsigned char raw : text) {
    state = next_[static_cast<std::size_t>(state)][fold(raw)];
    if (terminal_[static_cast<std::size_t>(state)]) return true;
  }
  return false;
}

}  // namespace crslearn::engine
