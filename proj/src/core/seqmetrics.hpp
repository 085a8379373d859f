#pragma once

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

namespace musekit {

// Levenshtein distance with unit insert/delete/substitute costs, rolling-row
// dynamic programming, O(min(n,m)) memory.
template <class Seq>
size_t edit_distance(const Seq& a, const Seq& b) {
  const Seq& shorter = a.size() <= b.size() ? a : b;
  const Seq& longer = a.size() <= b.size() ? b : a;
  size_t n = shorter.size();
  std::vector<size_t> row(n + 1);
  for (size_t j = 0; j <= n; ++j) row[j] = j;
  for (size_t i = 1; i <= longer.size(); ++i) {
    size_t prev_diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= n; ++j) {
      size_t del = row[j] + 1;
      size_t ins = row[j - 1] + 1;
      size_t sub = prev_diag + (longer[i - 1] == shorter[j - 1] ? 0 : 1);
      prev_diag = row[j];
      row[j] = std::min({del, ins, sub});
    }
  }
  return row[n];
}

// Longest common subsequence length, rolling-row DP.
template <class Seq>
size_t lcs_length(const Seq& a, const Seq& b) {
  const Seq& shorter = a.size() <= b.size() ? a : b;
  const Seq& longer = a.size() <= b.size() ? b : a;
  size_t n = shorter.size();
  if (n == 0) return 0;
  std::vector<size_t> row(n + 1, 0);
  for (size_t i = 1; i <= longer.size(); ++i) {
    size_t prev_diag = 0;
    for (size_t j = 1; j <= n; ++j) {
      size_t cur = row[j];
      if (longer[i - 1] == shorter[j - 1])
        row[j] = prev_diag + 1;
      else
        row[j] = std::max(row[j], row[j - 1]);
      prev_diag = cur;
    }
  }
  return row[n];
}

inline size_t edit_distance_str(std::string_view a, std::string_view b) {
  struct View {
    std::string_view s;
    size_t size() const { return s.size(); }
    char operator[](size_t i) const { return s[i]; }
  };
  return edit_distance(View{a}, View{b});
}

inline size_t lcs_length_str(std::string_view a, std::string_view b) {
  struct View {
    std::string_view s;
    size_t size() const { return s.size(); }
    char operator[](size_t i) const { return s[i]; }
  };
  return lcs_length(View{a}, View{b});
}

}  // namespace musekit
