#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace musekit {

inline std::string_view trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
    --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '\n') {
      std::string_view line = s.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      out.push_back(line);
      start = i + 1;
    }
  }
  if (!out.empty() && out.back().empty() && !s.empty() && s.back() == '\n')
    out.pop_back();
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts,
                        std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Number of UTF-8 codepoints; each invalid byte counts as one codepoint so
// the result is defined for arbitrary byte strings.
inline size_t utf8_count(std::string_view s) {
  size_t n = 0;
  for (size_t i = 0; i < s.size();) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    size_t len = 1;
    if (c >= 0xf0)
      len = 4;
    else if (c >= 0xe0)
      len = 3;
    else if (c >= 0xc0)
      len = 2;
    size_t j = i + 1;
    size_t took = 1;
    while (took < len && j < s.size() &&
           (static_cast<unsigned char>(s[j]) & 0xc0) == 0x80) {
      ++j;
      ++took;
    }
    i = j;
    ++n;
  }
  return n;
}

// Splits into UTF-8 codepoints with the same permissive rule as utf8_count.
inline std::vector<std::string> utf8_split(std::string_view s) {
  std::vector<std::string> out;
  for (size_t i = 0; i < s.size();) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    size_t len = 1;
    if (c >= 0xf0)
      len = 4;
    else if (c >= 0xe0)
      len = 3;
    else if (c >= 0xc0)
      len = 2;
    size_t j = i + 1;
    size_t took = 1;
    while (took < len && j < s.size() &&
           (static_cast<unsigned char>(s[j]) & 0xc0) == 0x80) {
      ++j;
      ++took;
    }
    out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace musekit
