#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core/rational.hpp"

namespace musekit {

// Strict parser for the ABC subset used throughout: header fields followed by
// a body of notes, rests, bracket chords, quoted chord symbols, barlines,
// voltas, tuplets, slurs, grace groups, decorations, broken rhythm, ties,
// inline fields, line breaks and comments. Lyrics (w:), voices (V:) and
// %%-directives are rejected.

enum class Accidental { None, Sharp, Flat, Natural };

struct Note {
  char pitch = 'C';  // A-G or a-g
  Accidental accidental = Accidental::None;
  int octave_shift = 0;  // count of ' minus count of ,
  Rational duration{1, 1};
  bool operator==(const Note&) const = default;
};

struct Rest {
  Rational duration{1, 1};
  bool operator==(const Rest&) const = default;
};

// Square-bracket chord; a duration suffix on the bracket is folded into the
// member notes at parse time.
struct MultiNote {
  std::vector<Note> notes;
  bool operator==(const MultiNote&) const = default;
};

struct ChordSymbol {
  std::string text;
  bool operator==(const ChordSymbol&) const = default;
};

enum class BarKind { Plain, Double, Final, RepeatStart, RepeatEnd, RepeatBoth };

struct Barline {
  BarKind kind = BarKind::Plain;
  bool operator==(const Barline&) const = default;
};

struct Volta {
  int number = 1;
  bool operator==(const Volta&) const = default;
};

struct Tuplet {
  int n = 3;
  bool operator==(const Tuplet&) const = default;
};

struct SlurOpen {
  bool operator==(const SlurOpen&) const = default;
};
struct SlurClose {
  bool operator==(const SlurClose&) const = default;
};

struct BodyToken;

struct GraceGroup {
  bool acciaccatura = false;  // leading slash form {/...}
  std::vector<BodyToken> inner;
  bool operator==(const GraceGroup&) const;
};

// Stored verbatim: ".", "~" or "!name!".
struct Decoration {
  std::string text;
  bool operator==(const Decoration&) const = default;
};

enum class BrokenDirection { Left, Right };  // '<' and '>'

struct BrokenRhythm {
  BrokenDirection direction = BrokenDirection::Right;
  bool operator==(const BrokenRhythm&) const = default;
};

struct Tie {
  bool operator==(const Tie&) const = default;
};

struct InlineField {
  char field = 'K';
  std::string value;
  bool operator==(const InlineField&) const = default;
};

struct LineBreak {
  bool operator==(const LineBreak&) const = default;
};

struct Comment {
  std::string text;  // without the leading %
  bool operator==(const Comment&) const = default;
};

struct BodyToken {
  std::variant<Note, Rest, MultiNote, ChordSymbol, Barline, Volta, Tuplet,
               SlurOpen, SlurClose, GraceGroup, Decoration, BrokenRhythm, Tie,
               InlineField, LineBreak, Comment>
      v;
  bool operator==(const BodyToken&) const = default;
};

inline bool GraceGroup::operator==(const GraceGroup& o) const {
  return acciaccatura == o.acciaccatura && inner == o.inner;
}

template <class T>
bool is(const BodyToken& t) {
  return std::holds_alternative<T>(t.v);
}
template <class T>
const T* as(const BodyToken& t) {
  return std::get_if<T>(&t.v);
}

struct Header {
  char key = 'X';
  std::string value;
  bool operator==(const Header&) const = default;
};

struct Tune {
  std::vector<Header> headers;
  std::vector<BodyToken> body;
  std::string source;  // original text, kept for token statistics

  const std::string* header(char key) const {
    for (const auto& h : headers)
      if (h.key == key) return &h.value;
    return nullptr;
  }
  // Structural identity ignores the source text.
  friend bool operator==(const Tune& a, const Tune& b) {
    return a.headers == b.headers && a.body == b.body;
  }
};

enum class ParseErrorKind {
  MissingXHeader,
  UnbalancedBracket,
  UnbalancedQuote,
  BadDuration,
  UnknownSymbol,
  EmptyBody,
};

const char* parse_error_kind_name(ParseErrorKind k);

struct ParseError {
  ParseErrorKind kind = ParseErrorKind::UnknownSymbol;
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  std::string message;
};

struct ParseResult {
  std::optional<Tune> tune;
  std::optional<ParseError> error;
  bool ok() const { return tune.has_value(); }
};

// Total on arbitrary byte input: returns a tune or a typed error, never
// throws for malformed text.
ParseResult parse_tune(std::string_view text);

// Canonical text form; reparsing it yields a structurally equal tune.
std::string serialize(const Tune& tune);
std::string token_text(const BodyToken& tok);

// Splits the body at section delimiters (|: before; :| unless a volta
// follows; :: || |] after). Sections tile the body: concatenating them in
// order reproduces it exactly. A leading pickup span without barlines is
// merged into the first real section.
std::vector<std::vector<BodyToken>> split_sections(const Tune& tune);

struct DurationInfo {
  Rational whole_note_total;  // repeat-expanded, in whole notes
  Rational seconds;
  Rational tempo_qpm;  // quarter notes per minute
};

// Repeat-expanded length of a token span in whole notes, given the unit note
// length. |:...:| spans count twice, volta endings once each, an unmatched :|
// repeats from the start of the span.
Rational span_whole_total(const std::vector<BodyToken>& span, Rational unit);

// Uses the L and Q headers (defaults 1/8 and 120 qpm). Throws MkError
// "zero_duration" when no timed token exists.
DurationInfo duration_info(const Tune& tune);

// Parses "a/b" style fractions (header semantics for L and M).
std::optional<Rational> parse_fraction(std::string_view s);

// Tempo in quarter notes per minute from a Q header value: "120" or
// "a/b=n". Returns nullopt for malformed values.
std::optional<Rational> parse_tempo_qpm(std::string_view value);

// Tunebook splitting: chunks separated by blank lines, each starting at an
// X: header line. A file holding a single tune yields one chunk.
std::vector<std::string> split_tunebook(std::string_view text);

}  // namespace musekit
