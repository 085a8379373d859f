#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/abc.hpp"
#include "core/control.hpp"

namespace musekit {

// Similarity levels 0..10 fall into three classes that drive form analysis.
enum class SimilarityClass { Different, Variation, Same };

// Throws MkError("value_out_of_range") when level is outside [0,10].
SimilarityClass classify_similarity(int level);

// One element of an alphabetic form: a base letter plus a prime count
// (A = {'A',0}, B' = {'B',1}, C'' = {'C',2}, ...).
struct AlphabeticForm {
  std::vector<std::pair<char, int>> elements;

  std::string text() const;
  bool operator==(const AlphabeticForm&) const = default;
};

// Derives the alphabetic form from a control code's similarity triangle.
// Each section either reuses an earlier element (level >= 8), varies one
// (level in [6,8)), or introduces the next fresh letter.
AlphabeticForm alphabetic_form(const ControlCode& cc);

// Parses text like "ABB'C". Returns nullopt on any character that is not
// an uppercase letter or a prime following one.
std::optional<AlphabeticForm> parse_alpha(std::string_view text);

enum class FormTerm {
  OnlyOneSection,
  Binary,
  Ternary,
  Variational,
  AmericanPopular,
  VerseChorus,
  VerseChorusBridge,
  VerseChorusVerseBridge,
  ThroughComposed,
  CompoundBinary,
  CompoundTernary,
};

const char* form_term_name(FormTerm term);

// All conventional terms that describe the given alphabetic form. Never
// empty: forms matching nothing specific fall back to Through Composed.
std::set<FormTerm> terminology_forms(const AlphabeticForm& form);

// Keeps only the tokens that carry melodic identity: notes, rests,
// multi-notes and tuplet markers.
std::vector<BodyToken> filter_for_motif(const std::vector<BodyToken>& body);

// Most frequent contiguous token sequence of length 1..max_len in the
// filtered section; ties broken by longer length, then earliest first
// occurrence. Throws MkError("empty_after_filter") when nothing remains
// after filtering.
std::vector<BodyToken> extract_motif(const std::vector<BodyToken>& section,
                                     size_t max_len = 8);

std::vector<std::vector<BodyToken>> extract_motifs_per_section(
    const Tune& tune, size_t max_len = 8);

// Chord symbol texts in body order.
std::vector<std::string> extract_chords(const Tune& tune);

// Copy of the tune without chord symbols; source is re-serialized.
Tune strip_chords(const Tune& tune);

}  // namespace musekit
