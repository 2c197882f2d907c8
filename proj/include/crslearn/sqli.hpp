// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace crslearn::engine {

using SqliDetector = std::function<bool(std::string_view)>;

// Shipped heuristic behind @detectSQLi: tokenizes the value into SQL token
// classes and fires on known suspicious token-class fingerprints (length
// >= 3, e.g. value / quote-break / logic-keyword). The value is evaluated
// both as-is and as if it continued a single-quoted string.
bool default_detect_sqli(std::string_view value);

// Token-class string of the as-is context, for tests and debugging.
std::string sqli_fingerprint(std::string_view value);

// @detectSQLi is pluggable: a different detector (e.g. real libinjection)
// can be installed process-wide. Passing an empty function restores the
// default. Not thread-safe against concurrent matching; install before
// evaluation starts.
void set_sqli_detector(SqliDetector detector);
bool detect_sqli(std::string_view value);

}  // namespace crslearn::engine
