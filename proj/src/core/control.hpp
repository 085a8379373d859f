#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/abc.hpp"

namespace musekit {

// S/B/E structure string: section count, bars per section, and a
// lower-triangular 0-10 similarity matrix. sims[n][m] is the similarity
// between section m+1 and section n+2 (0-indexed storage).
struct ControlCode {
  int num_sections = 1;
  std::vector<int> bars;
  std::vector<std::vector<int>> sims;
  bool operator==(const ControlCode&) const = default;
};

enum class CcErrorReason {
  MissingS,
  WrongECount,
  BadValue,
  ValueOutOfRange,
  SectionCountMismatch,
};

const char* cc_error_reason_name(CcErrorReason r);

struct CcError {
  CcErrorReason reason = CcErrorReason::BadValue;
  std::string message;
};

struct CcParseResult {
  std::optional<ControlCode> code;
  std::optional<CcError> error;
  bool ok() const { return code.has_value(); }
};

// Whitespace-separated "S:n B:k E:v ..." fields. The n-th B must be preceded
// by exactly n-1 E fields since the previous B. A trailing S repeating the
// section count is accepted and dropped.
CcParseResult parse_control_code(std::string_view text);

// Canonical form; never emits the trailing S echo.
std::string serialize_control_code(const ControlCode& cc);

// Validates the structural invariants of an in-memory code.
std::optional<CcError> validate_control_code(const ControlCode& cc);

// Similarity on the 0-10 scale: round-half-up of 10*(1 - dist/maxlen) over
// the two serialized section strings.
int similarity_level_0_10(std::string_view a, std::string_view b);

// Derives a control code from the music itself: bars per section counted
// between barlines, similarities via character edit distance over serialized
// sections with chord symbols and formatting removed. Throws MkError
// "empty_section" when a section has no timed tokens.
ControlCode compute_control_code(const Tune& tune);

// The section text used for similarity comparison.
std::string section_compare_text(const std::vector<BodyToken>& section);

}  // namespace musekit
