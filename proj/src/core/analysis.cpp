#include "core/analysis.hpp"

#include <algorithm>
#include <unordered_map>

#include "core/errors.hpp"

namespace musekit {

SimilarityClass classify_similarity(int level) {
  if (level < 0 || level > 10)
    fail("value_out_of_range",
         "similarity level " + std::to_string(level) + " outside [0,10]");
  if (level >= 8) return SimilarityClass::Same;
  if (level >= 6) return SimilarityClass::Variation;
  return SimilarityClass::Different;
}

std::string AlphabeticForm::text() const {
  std::string out;
  for (auto [letter, primes] : elements) {
    out += letter;
    out.append(static_cast<size_t>(primes), '\'');
  }
  return out;
}

AlphabeticForm alphabetic_form(const ControlCode& cc) {
  if (auto err = validate_control_code(cc))
    fail("value_out_of_range", err->message);

  AlphabeticForm form;
  char next_fresh = 'A';
  for (int n = 0; n < cc.num_sections; ++n) {
    if (n == 0) {
      form.elements.emplace_back(next_fresh++, 0);
      continue;
    }
    const auto& row = cc.sims[static_cast<size_t>(n) - 1];
    int first_same = -1;
    int first_variation = -1;
    for (int m = 0; m < n; ++m) {
      switch (classify_similarity(row[static_cast<size_t>(m)])) {
        case SimilarityClass::Same:
          if (first_same < 0) first_same = m;
          break;
        case SimilarityClass::Variation:
          if (first_variation < 0) first_variation = m;
          break;
        case SimilarityClass::Different:
          break;
      }
    }
    if (first_same >= 0) {
      form.elements.push_back(form.elements[static_cast<size_t>(first_same)]);
    } else if (first_variation >= 0) {
      auto base = form.elements[static_cast<size_t>(first_variation)];
      form.elements.emplace_back(base.first, base.second + 1);
    } else {
      if (next_fresh > 'Z')
        fail("value_out_of_range", "more than 26 distinct sections");
      form.elements.emplace_back(next_fresh++, 0);
    }
  }
  return form;
}

std::optional<AlphabeticForm> parse_alpha(std::string_view text) {
  AlphabeticForm form;
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') {
      form.elements.emplace_back(c, 0);
    } else if (c == '\'') {
      if (form.elements.empty()) return std::nullopt;
      form.elements.back().second++;
    } else {
      return std::nullopt;
    }
  }
  if (form.elements.empty()) return std::nullopt;
  return form;
}

const char* form_term_name(FormTerm term) {
  switch (term) {
    case FormTerm::OnlyOneSection:
      return "Only One Section";
    case FormTerm::Binary:
      return "Binary";
    case FormTerm::Ternary:
      return "Ternary";
    case FormTerm::Variational:
      return "Variational";
    case FormTerm::AmericanPopular:
      return "American Popular";
    case FormTerm::VerseChorus:
      return "Verse/Chorus";
    case FormTerm::VerseChorusBridge:
      return "Verse/Chorus/Bridge";
    case FormTerm::VerseChorusVerseBridge:
      return "Verse/Chorus/Verse/Bridge";
    case FormTerm::ThroughComposed:
      return "Through Composed";
    case FormTerm::CompoundBinary:
      return "Compound Binary";
    case FormTerm::CompoundTernary:
      return "Compound Ternary";
  }
  return "Through Composed";
}

namespace {

// Renames letters to A,B,C,... in order of first appearance.
std::string canonical_letters(std::string_view base) {
  std::string out;
  std::unordered_map<char, char> rename;
  char next = 'A';
  for (char c : base) {
    auto it = rename.find(c);
    if (it == rename.end()) it = rename.emplace(c, next++).first;
    out += it->second;
  }
  return out;
}

}  // namespace

std::set<FormTerm> terminology_forms(const AlphabeticForm& form) {
  std::set<FormTerm> terms;
  size_t k = form.elements.size();
  if (k == 0) return {FormTerm::ThroughComposed};
  if (k == 1) return {FormTerm::OnlyOneSection};

  std::string base;
  for (auto [letter, primes] : form.elements) base += letter;

  bool all_same = std::all_of(base.begin(), base.end(),
                              [&](char c) { return c == base[0]; });
  if (all_same) terms.insert(FormTerm::Variational);

  if (base == "AB") terms.insert(FormTerm::Binary);
  if (base == "ABA") terms.insert(FormTerm::Ternary);
  if (base == "AABA") terms.insert(FormTerm::AmericanPopular);
  if (base == "ABCB") terms.insert(FormTerm::VerseChorusBridge);
  if (base == "ABABCB") terms.insert(FormTerm::VerseChorusVerseBridge);

  if (k >= 4 && k % 2 == 0) {
    std::string verse_chorus;
    for (size_t i = 0; i < k / 2; ++i) verse_chorus += "AB";
    if (base == verse_chorus) terms.insert(FormTerm::VerseChorus);

    std::string first = canonical_letters(base.substr(0, k / 2));
    std::string second = canonical_letters(base.substr(k / 2));
    if (first == "AB" && second == "AB") terms.insert(FormTerm::CompoundBinary);
    if (first == "ABA" && second == "ABA")
      terms.insert(FormTerm::CompoundTernary);
  }

  if (k >= 3) {
    std::string sorted = base;
    std::sort(sorted.begin(), sorted.end());
    bool all_distinct =
        std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    if (all_distinct) terms.insert(FormTerm::ThroughComposed);
  }

  if (terms.empty()) terms.insert(FormTerm::ThroughComposed);
  return terms;
}

std::vector<BodyToken> filter_for_motif(const std::vector<BodyToken>& body) {
  std::vector<BodyToken> out;
  for (const auto& tok : body)
    if (is<Note>(tok) || is<Rest>(tok) || is<MultiNote>(tok) || is<Tuplet>(tok))
      out.push_back(tok);
  return out;
}

std::vector<BodyToken> extract_motif(const std::vector<BodyToken>& section,
                                     size_t max_len) {
  auto filtered = filter_for_motif(section);
  if (filtered.empty())
    fail("empty_after_filter", "no melodic tokens to extract a motif from");

  struct Stat {
    size_t count = 0;
    size_t len = 0;
    size_t first_pos = 0;
  };
  std::unordered_map<std::string, Stat> grams;
  size_t n = filtered.size();
  for (size_t i = 0; i < n; ++i) {
    std::string key;
    for (size_t len = 1; len <= max_len && i + len <= n; ++len) {
      if (len > 1) key += '\x1f';
      key += token_text(filtered[i + len - 1]);
      auto [it, inserted] = grams.emplace(key, Stat{0, len, i});
      it->second.count++;
    }
  }

  const Stat* best = nullptr;
  for (const auto& [key, stat] : grams) {
    if (!best || stat.count > best->count ||
        (stat.count == best->count && stat.len > best->len) ||
        (stat.count == best->count && stat.len == best->len &&
         stat.first_pos < best->first_pos))
      best = &stat;
  }
  return {filtered.begin() + static_cast<ptrdiff_t>(best->first_pos),
          filtered.begin() +
              static_cast<ptrdiff_t>(best->first_pos + best->len)};
}

std::vector<std::vector<BodyToken>> extract_motifs_per_section(
    const Tune& tune, size_t max_len) {
  std::vector<std::vector<BodyToken>> out;
  for (const auto& section : split_sections(tune))
    out.push_back(extract_motif(section, max_len));
  return out;
}

std::vector<std::string> extract_chords(const Tune& tune) {
  std::vector<std::string> out;
  for (const auto& tok : tune.body)
    if (const auto* c = as<ChordSymbol>(tok)) out.push_back(c->text);
  return out;
}

Tune strip_chords(const Tune& tune) {
  Tune out = tune;
  std::erase_if(out.body, [](const BodyToken& tok) {
    return is<ChordSymbol>(tok);
  });
  out.source = serialize(out);
  return out;
}

}  // namespace musekit
