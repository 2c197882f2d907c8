// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include "crslearn/transforms.hpp"

#include <array>
#include <cctype>

#include "crslearn/error.hpp"

namespace crslearn::engine {

namespace {

inline bool is_ws(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline int hex_val(unsigned char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string lowercase(std::string_view in) {
  std::string out(in);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// %XX and '+'; invalid escapes pass through unchanged. With `uni` set also
// %uXXXX, mapping the fullwidth ASCII block back onto ASCII and otherwise
// keeping the low byte — ModSecurity's lenient IIS-style behavior.
std::string url_decode(std::string_view in, bool uni) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    char c = in[i];
    if (c == '+') {
      out.push_back(' ');
      ++i;
    } else if (c == '%') {
      if (uni && i + 5 < in.size() && (in[i + 1] == 'u' || in[i + 1] == 'U')) {
        int h1 = hex_val(in[i + 2]), h2 = hex_val(in[i + 3]);
        int h3 = hex_val(in[i + 4]), h4 = hex_val(in[i + 5]);
        if (h1 >= 0 && h2 >= 0 && h3 >= 0 && h4 >= 0) {
          unsigned code = static_cast<unsigned>((h1 << 12) | (h2 << 8) | (h3 << 4) | h4);
          if (code >= 0xff01 && code <= 0xff5e) code -= 0xfee0;
          out.push_back(static_cast<char>(code & 0xff));
          i += 6;
          continue;
        }
      }
      if (i + 2 < in.size()) {
        int h1 = hex_val(in[i + 1]), h2 = hex_val(in[i + 2]);
        if (h1 >= 0 && h2 >= 0) {
          out.push_back(static_cast<char>((h1 << 4) | h2));
          i += 3;
          continue;
        }
      }
      out.push_back('%');
      ++i;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

std::string compress_whitespace(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool in_ws = false;
  for (char c : in) {
    if (is_ws(static_cast<unsigned char>(c))) {
      if (!in_ws) out.push_back(' ');
      in_ws = true;
    } else {
      out.push_back(c);
      in_ws = false;
    }
  }
  return out;
}

std::string remove_whitespace(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (char c : in) {
    if (!is_ws(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

// /*...*/ removed (unterminated removes the rest), -- and # remove through
// end of line.
std::string remove_comments(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == '/' && i + 1 < in.size() && in[i + 1] == '*') {
      std::size_t end = in.find("*/", i + 2);
      i = end == std::string_view::npos ? in.size() : end + 2;
    } else if (in[i] == '-' && i + 1 < in.size() && in[i + 1] == '-') {
      std::size_t nl = in.find('\n', i + 2);
      i = nl == std::string_view::npos ? in.size() : nl;
    } else if (in[i] == '#') {
      std::size_t nl = in.find('\n', i + 1);
      i = nl == std::string_view::npos ? in.size() : nl;
    } else {
      out.push_back(in[i]);
      ++i;
    }
  }
  return out;
}

// Each C-style comment becomes one space; unterminated comments too. A
// stray */ is left alone.
std::string replace_comments(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == '/' && i + 1 < in.size() && in[i + 1] == '*') {
      std::size_t end = in.find("*/", i + 2);
      out.push_back(' ');
      i = end == std::string_view::npos ? in.size() : end + 2;
    } else {
      out.push_back(in[i]);
      ++i;
    }
  }
  return out;
}

std::string html_entity_decode(std::string_view in) {
  static const std::array<std::pair<std::string_view, char>, 5> named = {{
      {"quot", '"'},
      {"amp", '&'},
      {"lt", '<'},
      {"gt", '>'},
      {"nbsp", static_cast<char>(0xa0)},
  }};
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] != '&') {
      out.push_back(in[i]);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (j < in.size() && in[j] == '#') {
      ++j;
      bool hex = j < in.size() && (in[j] == 'x' || in[j] == 'X');
      if (hex) ++j;
      unsigned code = 0;
      std::size_t digits = 0;
      while (j < in.size()) {
        int v = hex ? hex_val(in[j])
                    : (std::isdigit(static_cast<unsigned char>(in[j])) ? in[j] - '0' : -1);
        if (v < 0) break;
        code = code * (hex ? 16 : 10) + static_cast<unsigned>(v);
        ++digits;
        ++j;
      }
      if (digits > 0) {
        if (j < in.size() && in[j] == ';') ++j;
        out.push_back(static_cast<char>(code & 0xff));
        i = j;
        continue;
      }
    } else {
      bool matched = false;
      for (const auto& [name, ch] : named) {
        if (in.substr(j, name.size()) == name) {
          std::size_t k = j + name.size();
          if (k < in.size() && in[k] == ';') ++k;
          out.push_back(ch);
          i = k;
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out.push_back('&');
    ++i;
  }
  return out;
}

// Valid UTF-8 multibyte sequences in the BMP become %uHHHH; ASCII and
// anything malformed passes through byte for byte.
std::string utf8_to_unicode(std::string_view in) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    unsigned char c = static_cast<unsigned char>(in[i]);
    int len = 0;
    unsigned code = 0;
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      len = 2;
      code = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      len = 3;
      code = c & 0x0f;
    }
    bool ok = len > 0 && i + static_cast<std::size_t>(len) <= in.size();
    for (int k = 1; ok && k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(in[i + static_cast<std::size_t>(k)]);
      if ((cc & 0xc0) != 0x80) ok = false;
      code = (code << 6) | (cc & 0x3f);
    }
    if (ok && !(len == 2 && code < 0x80) && !(len == 3 && code < 0x800)) {
      out += "%u";
      out.push_back(hex[(code >> 12) & 0xf]);
      out.push_back(hex[(code >> 8) & 0xf]);
      out.push_back(hex[(code >> 4) & 0xf]);
      out.push_back(hex[code & 0xf]);
      i += static_cast<std::size_t>(len);
    } else {
      out.push_back(static_cast<char>(c));
      ++i;
    }
  }
  return out;
}

std::string remove_nulls(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (char c : in) {
    if (c != '\0') out.push_back(c);
  }
  return out;
}

}  // namespace

Transform transform_from_name(std::string_view name) {
  if (name == "none") return Transform::none;
  if (name == "lowercase") return Transform::lowercase;
  if (name == "urlDecode") return Transform::url_decode;
  if (name == "urlDecodeUni") return Transform::url_decode_uni;
  if (name == "compressWhitespace") return Transform::compress_whitespace;
  if (name == "removeWhitespace") return Transform::remove_whitespace;
  if (name == "removeComments") return Transform::remove_comments;
  if (name == "replaceComments") return Transform::replace_comments;
  if (name == "htmlEntityDecode") return Transform::html_entity_decode;
  if (name == "removeNulls") return Transform::remove_nulls;
  if (name == "utf8toUnicode") return Transform::utf8_to_unicode;
  throw Error(ErrorCode::unsupported_transformation,
              "unsupported transformation: " + std::string(name));
}

const char* transform_name(Transform t) {
  switch (t) {
    case Transform::none: return "none";
    case Transform::lowercase: return "lowercase";
    case Transform::url_decode: return "urlDecode";
    case Transform::url_decode_uni: return "urlDecodeUni";
    case Transform::compress_whitespace: return "compressWhitespace";
    case Transform::remove_whitespace: return "removeWhitespace";
    case Transform::remove_comments: return "removeComments";
    case Transform::replace_comments: return "replaceComments";
    case Transform::html_entity_decode: return "htmlEntityDecode";
    case Transform::remove_nulls: return "removeNulls";
    case Transform::utf8_to_unicode: return "utf8toUnicode";
  }
  return "none";
}

std::string apply_transform(Transform t, std::string_view value) {
  switch (t) {
    case Transform::none: return std::string(value);
    case Transform::lowercase: return lowercase(value);
    case Transform::url_decode: return url_decode(value, false);
    case Transform::url_decode_uni: return url_decode(value, true);
    case Transform::compress_whitespace: return compress_whitespace(value);
    case Transform::remove_whitespace: return remove_whitespace(value);
    case Transform::remove_comments: return remove_comments(value);
    case Transform::replace_comments: return replace_comments(value);
    case Transform::html_entity_decode: return html_entity_decode(value);
    case Transform::remove_nulls: return remove_nulls(value);
    case Transform::utf8_to_unicode: return utf8_to_unicode(value);
  }
  return std::string(value);
}

std::string transform(std::string_view value, const std::vector<Transform>& chain) {
  std::string acc(value);
  for (Transform t : chain) {
    if (t == Transform::none) {
      acc.assign(value);
    } else {
      acc = apply_transform(t, acc);
    }
  }
  return acc;
}

std::string transform(std::string_view value, const std::vector<std::string>& chain) {
  std::vector<Transform> ts;
  ts.reserve(chain.size());
  for (const auto& name : chain) ts.push_back(transform_from_name(name));
  return transform(value, ts);
}

}  // namespace crslearn::engine
