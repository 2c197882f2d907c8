// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crslearn::engine {

// Supported SecLang transformation functions. The semantics follow the
// ModSecurity reference behavior for each name.
enum class Transform {
  none,
  lowercase,
  url_decode,
  url_decode_uni,
  compress_whitespace,
  remove_whitespace,
  remove_comments,
  replace_comments,
  html_entity_decode,
  remove_nulls,
  utf8_to_unicode,
};

// Maps a SecLang name (e.g. "urlDecodeUni") to the enum; throws
// Error{unsupported_transformation} for anything outside the set.
Transform transform_from_name(std::string_view name);
const char* transform_name(Transform t);

std::string apply_transform(Transform t, std::string_view value);

// Applies the chain left to right; `none` resets the accumulated value back
// to the raw input per SecLang semantics.
std::string transform(std::string_view value, const std::vector<Transform>& chain);

// Name-based convenience used by the parser and tests.
std::string transform(std::string_view value, const std::vector<std::string>& chain);

}  // namespace crslearn::engine
