#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "core/seqmetrics.hpp"

using namespace musekit;

namespace {

// Full-matrix references, deliberately independent of the rolling-row code.
size_t edit_ref(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<std::vector<size_t>> d(a.size() + 1,
                                     std::vector<size_t>(b.size() + 1, 0));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (size_t i = 1; i <= a.size(); ++i)
    for (size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
  return d[a.size()][b.size()];
}

size_t lcs_ref(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<std::vector<size_t>> d(a.size() + 1,
                                     std::vector<size_t>(b.size() + 1, 0));
  for (size_t i = 1; i <= a.size(); ++i)
    for (size_t j = 1; j <= b.size(); ++j)
      d[i][j] = a[i - 1] == b[j - 1]
                    ? d[i - 1][j - 1] + 1
                    : std::max(d[i - 1][j], d[i][j - 1]);
  return d[a.size()][b.size()];
}

std::vector<int> random_seq(std::mt19937_64& gen, size_t max_len,
                            int alphabet) {
  std::vector<int> v(gen() % (max_len + 1));
  for (auto& x : v) x = static_cast<int>(gen() % alphabet);
  return v;
}

}  // namespace

TEST_CASE("edit distance hand cases") {
  using V = std::vector<std::string>;
  CHECK(edit_distance(V{"F", "C7", "F"}, V{"F", "C7", "Bb", "F"}) == 1);
  CHECK(edit_distance(V{"F", "C7", "F"}, V{}) == 3);
  CHECK(edit_distance(V{}, V{}) == 0);
  CHECK(edit_distance(V{"a"}, V{"b"}) == 1);
  CHECK(edit_distance_str("kitten", "sitting") == 3);
  CHECK(edit_distance_str("abcd", "abcf") == 1);
  CHECK(edit_distance_str("", "abc") == 3);
}

TEST_CASE("lcs hand cases") {
  using V = std::vector<std::string>;
  CHECK(lcs_length(V{"a", "b", "c", "d"}, V{"b", "d"}) == 2);
  CHECK(lcs_length(V{"a", "b"}, V{"c", "d"}) == 0);
  CHECK(lcs_length(V{"a", "b", "c"}, V{"a", "b", "c"}) == 3);
  CHECK(lcs_length(V{}, V{"a"}) == 0);
  CHECK(lcs_length_str("ABCBDAB", "BDCABA") == 4);
  CHECK(lcs_length_str("", "") == 0);
}

TEST_CASE("edit distance matches the reference on random pairs") {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 300; ++i) {
    auto a = random_seq(gen, 50, 4);
    auto b = random_seq(gen, 50, 4);
    CHECK(edit_distance(a, b) == edit_ref(a, b));
  }
}

TEST_CASE("lcs matches the reference on random pairs") {
  std::mt19937_64 gen(2);
  for (int i = 0; i < 300; ++i) {
    auto a = random_seq(gen, 50, 4);
    auto b = random_seq(gen, 50, 4);
    CHECK(lcs_length(a, b) == lcs_ref(a, b));
  }
}

TEST_CASE("edit distance is a metric") {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 200; ++i) {
    auto a = random_seq(gen, 30, 3);
    auto b = random_seq(gen, 30, 3);
    auto c = random_seq(gen, 30, 3);
    CHECK(edit_distance(a, a) == 0);
    CHECK(edit_distance(a, b) == edit_distance(b, a));
    CHECK(edit_distance(a, c) <=
          edit_distance(a, b) + edit_distance(b, c));
    if (edit_distance(a, b) == 0) CHECK(a == b);
  }
}

TEST_CASE("lcs bounds") {
  std::mt19937_64 gen(4);
  for (int i = 0; i < 200; ++i) {
    auto a = random_seq(gen, 30, 3);
    auto b = random_seq(gen, 30, 3);
    size_t l = lcs_length(a, b);
    CHECK(l <= std::min(a.size(), b.size()));
    CHECK(lcs_length(a, b) == lcs_length(b, a));
    CHECK(lcs_length(a, a) == a.size());
    // |a| + |b| - 2*lcs upper-bounds nothing below the edit distance
    CHECK(edit_distance(a, b) <= a.size() + b.size() - 2 * l);
    // distance can't beat the length gap
    size_t gap = a.size() > b.size() ? a.size() - b.size()
                                     : b.size() - a.size();
    CHECK(edit_distance(a, b) >= gap);
  }
}

TEST_CASE("string views agree with vector versions") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 100; ++i) {
    std::string sa, sb;
    std::vector<int> va, vb;
    size_t la = gen() % 40, lb = gen() % 40;
    for (size_t k = 0; k < la; ++k) {
      int c = static_cast<int>(gen() % 4);
      sa += static_cast<char>('a' + c);
      va.push_back(c);
    }
    for (size_t k = 0; k < lb; ++k) {
      int c = static_cast<int>(gen() % 4);
      sb += static_cast<char>('a' + c);
      vb.push_back(c);
    }
    CHECK(edit_distance_str(sa, sb) == edit_distance(va, vb));
    CHECK(lcs_length_str(sa, sb) == lcs_length(va, vb));
  }
}
