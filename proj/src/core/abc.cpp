#include "core/abc.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace musekit {

namespace {

struct ParseAbort {
  ParseError err;
};

[[noreturn]] void abort_parse(ParseErrorKind kind, int line, int col,
                              std::string msg) {
  throw ParseAbort{ParseError{kind, line, col, std::move(msg)}};
}

bool is_note_letter(char c) {
  return (c >= 'A' && c <= 'G') || (c >= 'a' && c <= 'g');
}

bool is_header_line(std::string_view line) {
  return line.size() >= 2 && std::isalpha(static_cast<unsigned char>(line[0])) &&
         line[1] == ':';
}

class BodyScanner {
 public:
  BodyScanner(std::string_view text, int first_line)
      : s_(text), line_(first_line) {}

  std::vector<BodyToken> run() {
    while (!eof()) scan_one();
    return std::move(out_);
  }

 private:
  std::string_view s_;
  size_t i_ = 0;
  int line_;
  int col_ = 1;
  std::vector<BodyToken> out_;

  bool eof() const { return i_ >= s_.size(); }
  char peek(size_t ahead = 0) const {
    return i_ + ahead < s_.size() ? s_[i_ + ahead] : '\0';
  }
  char take() {
    char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  [[noreturn]] void err(ParseErrorKind kind, std::string msg) {
    abort_parse(kind, line_, col_, std::move(msg));
  }
  [[noreturn]] void err_at(ParseErrorKind kind, int line, int col,
                           std::string msg) {
    abort_parse(kind, line, col, std::move(msg));
  }

  const BodyToken* prev_significant() const {
    for (auto it = out_.rbegin(); it != out_.rend(); ++it) {
      if (is<LineBreak>(*it) || is<Comment>(*it)) continue;
      return &*it;
    }
    return nullptr;
  }

  void scan_one() {
    char c = peek();
    switch (c) {
      case ' ':
      case '\t':
        take();
        return;
      case '\r':
        if (peek(1) == '\n') {
          take();
          return;
        }
        err(ParseErrorKind::UnknownSymbol, "stray carriage return");
      case '\n':
        take();
        if (!eof()) out_.push_back({LineBreak{}});
        return;
      case '%':
        scan_comment();
        return;
      case '"':
        scan_chord_symbol();
        return;
      case '|':
        scan_bar_from_pipe();
        return;
      case ':':
        scan_bar_from_colon();
        return;
      case '[':
        scan_bracket();
        return;
      case ']':
        err(ParseErrorKind::UnbalancedBracket, "unmatched ]");
      case '(':
        scan_paren();
        return;
      case ')':
        take();
        out_.push_back({SlurClose{}});
        return;
      case '{':
        scan_grace();
        return;
      case '}':
        err(ParseErrorKind::UnbalancedBracket, "unmatched }");
      case '!':
        scan_bang_decoration();
        return;
      case '.':
      case '~':
        take();
        out_.push_back({Decoration{std::string(1, c)}});
        return;
      case '<':
        take();
        out_.push_back({BrokenRhythm{BrokenDirection::Left}});
        return;
      case '>':
        take();
        out_.push_back({BrokenRhythm{BrokenDirection::Right}});
        return;
      case '-':
        take();
        out_.push_back({Tie{}});
        return;
      case 'z':
        take();
        out_.push_back({Rest{scan_duration()}});
        return;
      case '^':
      case '_':
      case '=':
        out_.push_back({scan_note()});
        return;
      default:
        break;
    }
    if (is_note_letter(c)) {
      out_.push_back({scan_note()});
      return;
    }
    if (c >= '0' && c <= '9') {
      const BodyToken* prev = prev_significant();
      if (prev != nullptr && is<Barline>(*prev)) {
        out_.push_back({Volta{scan_volta_number()}});
        return;
      }
      err(ParseErrorKind::UnknownSymbol, "unexpected digit");
    }
    err(ParseErrorKind::UnknownSymbol,
        std::string("unexpected character '") + c + "'");
  }

  void scan_comment() {
    int line = line_, col = col_;
    take();  // %
    if (peek() == '%')
      err_at(ParseErrorKind::UnknownSymbol, line, col,
             "%%-directives are not supported");
    std::string text;
    while (!eof() && peek() != '\n') text += take();
    out_.push_back({Comment{std::move(text)}});
  }

  void scan_chord_symbol() {
    int line = line_, col = col_;
    take();  // "
    std::string text;
    while (true) {
      if (eof() || peek() == '\n')
        err_at(ParseErrorKind::UnbalancedQuote, line, col,
               "unterminated chord symbol");
      char c = take();
      if (c == '"') break;
      text += c;
    }
    out_.push_back({ChordSymbol{std::move(text)}});
  }

  void scan_bar_from_pipe() {
    take();  // |
    BarKind kind = BarKind::Plain;
    if (peek() == ':') {
      take();
      kind = BarKind::RepeatStart;
    } else if (peek() == '|') {
      take();
      kind = BarKind::Double;
    } else if (peek() == ']') {
      take();
      kind = BarKind::Final;
    }
    out_.push_back({Barline{kind}});
  }

  void scan_bar_from_colon() {
    take();  // :
    if (peek() == '|') {
      take();
      out_.push_back({Barline{BarKind::RepeatEnd}});
      return;
    }
    if (peek() == ':') {
      take();
      out_.push_back({Barline{BarKind::RepeatBoth}});
      return;
    }
    err(ParseErrorKind::UnknownSymbol, "lone ':'");
  }

  int scan_volta_number() {
    int line = line_, col = col_;
    long long n = 0;
    int digits = 0;
    while (peek() >= '0' && peek() <= '9') {
      n = n * 10 + (take() - '0');
      if (++digits > 4)
        err_at(ParseErrorKind::UnknownSymbol, line, col,
               "volta number too long");
    }
    if (n < 1)
      err_at(ParseErrorKind::UnknownSymbol, line, col, "volta number must be >= 1");
    return static_cast<int>(n);
  }

  void scan_bracket() {
    int line = line_, col = col_;
    take();  // [
    char c = peek();
    if (c >= '0' && c <= '9') {
      out_.push_back({Volta{scan_volta_number()}});
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) && peek(1) == ':') {
      char field = take();
      take();  // :
      if (field == 'V' || field == 'w' || field == 'W')
        err_at(ParseErrorKind::UnknownSymbol, line, col,
               std::string("unsupported inline field '") + field + "'");
      std::string value;
      while (true) {
        if (eof() || peek() == '\n')
          err_at(ParseErrorKind::UnbalancedBracket, line, col,
                 "unterminated inline field");
        char v = take();
        if (v == ']') break;
        value += v;
      }
      out_.push_back({InlineField{field, std::move(value)}});
      return;
    }
    // bracket chord
    MultiNote mn;
    while (true) {
      if (eof() || peek() == '\n')
        err_at(ParseErrorKind::UnbalancedBracket, line, col,
               "unterminated bracket chord");
      char v = peek();
      if (v == ' ' || v == '\t') {
        take();
        continue;
      }
      if (v == ']') {
        take();
        break;
      }
      if (v == '^' || v == '_' || v == '=' || is_note_letter(v)) {
        mn.notes.push_back(scan_note());
        continue;
      }
      err(ParseErrorKind::UnknownSymbol,
          std::string("unexpected character '") + v + "' in bracket chord");
    }
    if (mn.notes.empty())
      err_at(ParseErrorKind::UnknownSymbol, line, col, "empty bracket chord");
    Rational suffix = scan_duration();
    if (suffix != Rational(1))
      for (auto& note : mn.notes) note.duration *= suffix;
    out_.push_back({std::move(mn)});
  }

  void scan_paren() {
    take();  // (
    if (peek() >= '0' && peek() <= '9') {
      int line = line_, col = col_;
      int n = take() - '0';
      if (n < 2)
        err_at(ParseErrorKind::UnknownSymbol, line, col,
               "tuplet size must be 2-9");
      out_.push_back({Tuplet{n}});
      return;
    }
    out_.push_back({SlurOpen{}});
  }

  void scan_grace() {
    int line = line_, col = col_;
    take();  // {
    GraceGroup g;
    if (peek() == '/') {
      take();
      g.acciaccatura = true;
    }
    while (true) {
      if (eof() || peek() == '\n')
        err_at(ParseErrorKind::UnbalancedBracket, line, col,
               "unterminated grace group");
      char c = peek();
      if (c == ' ' || c == '\t') {
        take();
        continue;
      }
      if (c == '}') {
        take();
        break;
      }
      if (c == '^' || c == '_' || c == '=' || is_note_letter(c)) {
        g.inner.push_back({scan_note()});
        continue;
      }
      err(ParseErrorKind::UnknownSymbol,
          std::string("unexpected character '") + c + "' in grace group");
    }
    out_.push_back({std::move(g)});
  }

  void scan_bang_decoration() {
    int line = line_, col = col_;
    take();  // !
    std::string name;
    while (true) {
      if (eof() || peek() == '\n')
        err_at(ParseErrorKind::UnbalancedBracket, line, col,
               "unterminated decoration");
      char c = take();
      if (c == '!') break;
      name += c;
    }
    out_.push_back({Decoration{"!" + name + "!"}});
  }

  Note scan_note() {
    Note note;
    char c = peek();
    if (c == '^' || c == '_' || c == '=') {
      int line = line_, col = col_;
      take();
      note.accidental = c == '^'   ? Accidental::Sharp
                        : c == '_' ? Accidental::Flat
                                   : Accidental::Natural;
      if (!is_note_letter(peek()))
        err_at(ParseErrorKind::UnknownSymbol, line, col,
               "accidental not followed by a note letter");
    }
    note.pitch = take();
    while (peek() == '\'' || peek() == ',') {
      note.octave_shift += take() == '\'' ? 1 : -1;
    }
    note.duration = scan_duration();
    return note;
  }

  // duration := int? ('/' int?)*  — absent parts default to 1 and 2.
  Rational scan_duration() {
    long long num = 1, den = 1;
    if (peek() >= '0' && peek() <= '9') num = scan_int();
    while (peek() == '/') {
      take();
      if (peek() >= '0' && peek() <= '9')
        den *= scan_int();
      else
        den *= 2;
      if (den > 1000000000LL)
        err(ParseErrorKind::BadDuration, "duration denominator too large");
    }
    if (num == 0 || den == 0)
      err(ParseErrorKind::BadDuration, "zero duration");
    return Rational(num, den);
  }

  long long scan_int() {
    int line = line_, col = col_;
    if (peek() == '0' && peek(1) >= '0' && peek(1) <= '9')
      err_at(ParseErrorKind::BadDuration, line, col,
             "leading zero in duration");
    long long n = 0;
    int digits = 0;
    while (peek() >= '0' && peek() <= '9') {
      n = n * 10 + (take() - '0');
      if (++digits > 9)
        err_at(ParseErrorKind::BadDuration, line, col, "duration too long");
    }
    if (n == 0) err_at(ParseErrorKind::BadDuration, line, col, "zero duration");
    return n;
  }
};

}  // namespace

std::optional<Rational> parse_fraction(std::string_view s) {
  size_t slash = s.find('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 >= s.size())
    return std::nullopt;
  long long num = 0, den = 0;
  for (char c : s.substr(0, slash)) {
    if (c < '0' || c > '9') return std::nullopt;
    num = num * 10 + (c - '0');
    if (num > 1000000000LL) return std::nullopt;
  }
  for (char c : s.substr(slash + 1)) {
    if (c < '0' || c > '9') return std::nullopt;
    den = den * 10 + (c - '0');
    if (den > 1000000000LL) return std::nullopt;
  }
  if (den == 0) return std::nullopt;
  return Rational(num, den);
}

// Tempo forms: "120" (quarter notes per minute) or "a/b=n" (n beats of a/b
// whole notes per minute).
std::optional<Rational> parse_tempo_qpm(std::string_view value) {
  value = trim(value);
  if (value.empty()) return std::nullopt;
  size_t eq = value.find('=');
  if (eq == std::string_view::npos) {
    long long n = 0;
    for (char c : value) {
      if (c < '0' || c > '9') return std::nullopt;
      n = n * 10 + (c - '0');
      if (n > 100000) return std::nullopt;
    }
    if (n == 0) return std::nullopt;
    return Rational(n);
  }
  auto beat = parse_fraction(trim(value.substr(0, eq)));
  if (!beat || beat->num <= 0) return std::nullopt;
  long long n = 0;
  std::string_view rhs = trim(value.substr(eq + 1));
  if (rhs.empty()) return std::nullopt;
  for (char c : rhs) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + (c - '0');
    if (n > 100000) return std::nullopt;
  }
  if (n == 0) return std::nullopt;
  return Rational(n) * *beat * Rational(4);
}

namespace {

void validate_header(char key, std::string_view raw_value, int line_no) {
  std::string_view value = trim(raw_value);
  if (key == 'L') {
    auto frac = parse_fraction(value);
    if (!frac || frac->num <= 0)
      abort_parse(ParseErrorKind::BadDuration, line_no, 3,
                  "malformed unit note length");
  } else if (key == 'M') {
    if (value == "C" || value == "C|") return;
    auto frac = parse_fraction(value);
    if (!frac || frac->num <= 0)
      abort_parse(ParseErrorKind::BadDuration, line_no, 3, "malformed meter");
  } else if (key == 'Q') {
    if (!parse_tempo_qpm(value))
      abort_parse(ParseErrorKind::BadDuration, line_no, 3, "malformed tempo");
  }
}

}  // namespace

const char* parse_error_kind_name(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::MissingXHeader:
      return "missing_X_header";
    case ParseErrorKind::UnbalancedBracket:
      return "unbalanced_bracket";
    case ParseErrorKind::UnbalancedQuote:
      return "unbalanced_quote";
    case ParseErrorKind::BadDuration:
      return "bad_duration";
    case ParseErrorKind::UnknownSymbol:
      return "unknown_symbol";
    case ParseErrorKind::EmptyBody:
      return "empty_body";
  }
  return "unknown_symbol";
}

ParseResult parse_tune(std::string_view text) {
  try {
    struct Line {
      std::string_view text;  // without trailing \r or \n
      size_t offset = 0;      // byte offset of line start
      int number = 0;         // 1-based
    };
    std::vector<Line> lines;
    {
      size_t start = 0;
      int no = 1;
      for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
          std::string_view line = text.substr(start, i - start);
          if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
          lines.push_back({line, start, no++});
          if (i == text.size()) break;
          start = i + 1;
        }
      }
    }

    Tune tune;
    tune.source.assign(text);

    size_t idx = 0;
    // Leading blank and comment lines before the X header are tolerated.
    while (idx < lines.size()) {
      std::string_view t = trim(lines[idx].text);
      if (t.empty()) {
        ++idx;
        continue;
      }
      if (t[0] == '%') {
        if (t.size() >= 2 && t[1] == '%')
          abort_parse(ParseErrorKind::UnknownSymbol, lines[idx].number, 1,
                      "%%-directives are not supported");
        ++idx;
        continue;
      }
      break;
    }
    if (idx >= lines.size())
      abort_parse(ParseErrorKind::EmptyBody, static_cast<int>(lines.size()), 1,
                  "no content");
    if (!is_header_line(lines[idx].text) || lines[idx].text[0] != 'X')
      abort_parse(ParseErrorKind::MissingXHeader, lines[idx].number, 1,
                  "tune must start with an X header");

    bool have_body = false;
    size_t body_offset = 0;
    int body_line = 0;
    bool seen_x = false;
    while (idx < lines.size()) {
      std::string_view line = lines[idx].text;
      int line_no = lines[idx].number;
      if (trim(line).empty()) {
        ++idx;
        continue;
      }
      if (line[0] == '%') {
        if (line.size() >= 2 && line[1] == '%')
          abort_parse(ParseErrorKind::UnknownSymbol, line_no, 1,
                      "%%-directives are not supported");
        ++idx;
        continue;
      }
      if (!is_header_line(line)) {
        have_body = true;
        body_offset = lines[idx].offset;
        body_line = line_no;
        break;
      }
      char key = line[0];
      if (key == 'V' || key == 'w' || key == 'W')
        abort_parse(ParseErrorKind::UnknownSymbol, line_no, 1,
                    std::string("unsupported header field '") + key + "'");
      if (key == 'X') {
        if (seen_x)
          abort_parse(ParseErrorKind::UnknownSymbol, line_no, 1,
                      "duplicate X header");
        seen_x = true;
      }
      std::string_view value = line.substr(2);
      validate_header(key, value, line_no);
      tune.headers.push_back({key, std::string(value)});
      ++idx;
      if (key == 'K') {
        if (idx < lines.size()) {
          have_body = true;
          body_offset = lines[idx].offset;
          body_line = lines[idx].number;
        }
        break;
      }
    }

    if (have_body) {
      BodyScanner scanner(text.substr(body_offset), body_line);
      tune.body = scanner.run();
    }
    bool any_content = false;
    for (const auto& tok : tune.body)
      if (!is<LineBreak>(tok) && !is<Comment>(tok)) {
        any_content = true;
        break;
      }
    if (!any_content)
      abort_parse(ParseErrorKind::EmptyBody,
                  have_body ? body_line : static_cast<int>(lines.size()), 1,
                  "tune has no body tokens");

    return ParseResult{std::move(tune), std::nullopt};
  } catch (const ParseAbort& a) {
    return ParseResult{std::nullopt, a.err};
  }
}

namespace {

std::string duration_text(const Rational& d) {
  if (d == Rational(1)) return "";
  if (d == Rational(1, 2)) return "/";
  if (d.den == 1) return std::to_string(d.num);
  return std::to_string(d.num) + "/" + std::to_string(d.den);
}

std::string note_text(const Note& n) {
  std::string out;
  switch (n.accidental) {
    case Accidental::Sharp:
      out += '^';
      break;
    case Accidental::Flat:
      out += '_';
      break;
    case Accidental::Natural:
      out += '=';
      break;
    case Accidental::None:
      break;
  }
  out += n.pitch;
  for (int i = 0; i < n.octave_shift; ++i) out += '\'';
  for (int i = 0; i > n.octave_shift; --i) out += ',';
  out += duration_text(n.duration);
  return out;
}

}  // namespace

std::string token_text(const BodyToken& tok) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Note>) return note_text(t);
        if constexpr (std::is_same_v<T, Rest>)
          return "z" + duration_text(t.duration);
        if constexpr (std::is_same_v<T, MultiNote>) {
          std::string out = "[";
          for (const auto& n : t.notes) out += note_text(n);
          return out + "]";
        }
        if constexpr (std::is_same_v<T, ChordSymbol>)
          return "\"" + t.text + "\"";
        if constexpr (std::is_same_v<T, Barline>) {
          switch (t.kind) {
            case BarKind::Plain:
              return "|";
            case BarKind::Double:
              return "||";
            case BarKind::Final:
              return "|]";
            case BarKind::RepeatStart:
              return "|:";
            case BarKind::RepeatEnd:
              return ":|";
            case BarKind::RepeatBoth:
              return "::";
          }
          return "|";
        }
        if constexpr (std::is_same_v<T, Volta>)
          return "[" + std::to_string(t.number);
        if constexpr (std::is_same_v<T, Tuplet>)
          return "(" + std::to_string(t.n);
        if constexpr (std::is_same_v<T, SlurOpen>) return "(";
        if constexpr (std::is_same_v<T, SlurClose>) return ")";
        if constexpr (std::is_same_v<T, GraceGroup>) {
          std::string out = "{";
          if (t.acciaccatura) out += '/';
          for (const auto& inner : t.inner) out += token_text(inner);
          return out + "}";
        }
        if constexpr (std::is_same_v<T, Decoration>) return t.text;
        if constexpr (std::is_same_v<T, BrokenRhythm>)
          return t.direction == BrokenDirection::Left ? "<" : ">";
        if constexpr (std::is_same_v<T, Tie>) return "-";
        if constexpr (std::is_same_v<T, InlineField>)
          return std::string("[") + t.field + ":" + t.value + "]";
        if constexpr (std::is_same_v<T, LineBreak>) return "\n";
        if constexpr (std::is_same_v<T, Comment>) return "%" + t.text;
        return "";
      },
      tok.v);
}

std::string serialize(const Tune& tune) {
  std::string out;
  for (const auto& h : tune.headers) {
    out += h.key;
    out += ':';
    out += h.value;
    out += '\n';
  }
  bool at_line_start = true;
  for (size_t i = 0; i < tune.body.size(); ++i) {
    const BodyToken& tok = tune.body[i];
    if (is<LineBreak>(tok)) {
      out += '\n';
      at_line_start = true;
      continue;
    }
    if (!at_line_start) out += ' ';
    out += token_text(tok);
    at_line_start = false;
    // a comment runs to end of line, so anything but a line break after it
    // needs a forced newline
    if (is<Comment>(tok) && i + 1 < tune.body.size() &&
        !is<LineBreak>(tune.body[i + 1])) {
      out += '\n';
      at_line_start = true;
    }
  }
  // single trailing newline; the parser treats it as file termination
  out += '\n';
  return out;
}

namespace {

bool is_timed(const BodyToken& tok) {
  return is<Note>(tok) || is<Rest>(tok) || is<MultiNote>(tok);
}

bool span_has_timed(const std::vector<BodyToken>& body, size_t b, size_t e) {
  for (size_t i = b; i < e; ++i)
    if (is_timed(body[i])) return true;
  return false;
}

bool span_has_barline(const std::vector<BodyToken>& body, size_t b, size_t e) {
  for (size_t i = b; i < e; ++i)
    if (is<Barline>(body[i])) return true;
  return false;
}

}  // namespace

std::vector<std::vector<BodyToken>> split_sections(const Tune& tune) {
  const auto& body = tune.body;
  std::set<size_t> cuts;  // cut positions: before index
  for (size_t i = 0; i < body.size(); ++i) {
    const Barline* bar = as<Barline>(body[i]);
    if (bar == nullptr) continue;
    switch (bar->kind) {
      case BarKind::RepeatStart:
        if (i > 0) cuts.insert(i);
        break;
      case BarKind::RepeatEnd: {
        size_t j = i + 1;
        while (j < body.size() &&
               (is<LineBreak>(body[j]) || is<Comment>(body[j])))
          ++j;
        bool volta_follows = j < body.size() && is<Volta>(body[j]);
        if (!volta_follows && i + 1 < body.size()) cuts.insert(i + 1);
        break;
      }
      case BarKind::RepeatBoth:
      case BarKind::Double:
      case BarKind::Final:
        if (i + 1 < body.size()) cuts.insert(i + 1);
        break;
      case BarKind::Plain:
        break;
    }
  }

  std::vector<std::pair<size_t, size_t>> spans;
  size_t start = 0;
  for (size_t cut : cuts) {
    if (cut > start) spans.emplace_back(start, cut);
    start = cut;
  }
  if (start < body.size()) spans.emplace_back(start, body.size());
  if (spans.empty()) spans.emplace_back(0, 0);

  // Spans with no timed content (stray barlines, formatting) are not
  // sections of their own; fold them into a neighbor.
  std::vector<std::pair<size_t, size_t>> merged;
  for (size_t k = 0; k < spans.size(); ++k) {
    auto span = spans[k];
    if (!span_has_timed(body, span.first, span.second)) {
      if (k + 1 < spans.size()) {
        spans[k + 1].first = span.first;
        continue;
      }
      if (!merged.empty()) {
        merged.back().second = span.second;
        continue;
      }
    }
    merged.push_back(span);
  }
  // A pickup before the first delimiter belongs to the first real section.
  if (merged.size() >= 2 &&
      !span_has_barline(body, merged[0].first, merged[0].second)) {
    merged[1].first = merged[0].first;
    merged.erase(merged.begin());
  }

  std::vector<std::vector<BodyToken>> out;
  for (auto [b, e] : merged)
    out.emplace_back(body.begin() + static_cast<long>(b),
                     body.begin() + static_cast<long>(e));
  return out;
}

namespace {

Rational timed_value(const BodyToken& tok) {
  if (const Note* n = as<Note>(tok)) return n->duration;
  if (const Rest* r = as<Rest>(tok)) return r->duration;
  if (const MultiNote* m = as<MultiNote>(tok)) {
    Rational mx(0);
    for (const auto& n : m->notes)
      if (mx < n.duration) mx = n.duration;
    return mx;
  }
  return Rational(0);
}

}  // namespace

Rational span_whole_total(const std::vector<BodyToken>& span, Rational unit) {
  Rational total(0), base(0), once(0);
  bool in_volta = false;
  auto flush = [&](bool repeated) {
    total = total + (repeated ? base + base : base) + once;
    base = Rational(0);
    once = Rational(0);
    in_volta = false;
  };
  for (const auto& tok : span) {
    Rational t = timed_value(tok);
    if (t != Rational(0)) {
      Rational add = t * unit;
      if (in_volta)
        once += add;
      else
        base += add;
      continue;
    }
    if (is<Volta>(tok)) {
      in_volta = true;
      continue;
    }
    if (const Barline* bar = as<Barline>(tok)) {
      switch (bar->kind) {
        case BarKind::RepeatEnd:
        case BarKind::RepeatBoth:
          flush(true);
          break;
        case BarKind::RepeatStart:
          flush(false);
          break;
        case BarKind::Double:
        case BarKind::Final:
          in_volta = false;
          break;
        case BarKind::Plain:
          break;
      }
    }
  }
  flush(false);
  return total;
}

DurationInfo duration_info(const Tune& tune) {
  Rational unit(1, 8);
  if (const std::string* l = tune.header('L')) {
    auto frac = parse_fraction(trim(*l));
    if (frac) unit = *frac;
  }
  Rational qpm(120);
  if (const std::string* q = tune.header('Q')) {
    auto parsed = parse_tempo_qpm(*q);
    if (parsed) qpm = *parsed;
  }
  Rational whole = span_whole_total(tune.body, unit);
  if (whole == Rational(0))
    fail("zero_duration", "tune body has no timed tokens");
  DurationInfo info;
  info.whole_note_total = whole;
  info.tempo_qpm = qpm;
  info.seconds = whole * Rational(4) * Rational(60) / qpm;
  return info;
}

std::vector<std::string> split_tunebook(std::string_view text) {
  std::vector<std::string> chunks;
  std::string current;
  bool have_content = false;
  for (std::string_view line : split_lines(text)) {
    if (trim(line).empty()) {
      if (have_content) {
        chunks.push_back(current);
        current.clear();
        have_content = false;
      }
      continue;
    }
    current.append(line);
    current += '\n';
    have_content = true;
  }
  if (have_content) chunks.push_back(current);
  return chunks;
}

}  // namespace musekit
