#include "core/control.hpp"

#include <sstream>

#include "core/errors.hpp"
#include "core/seqmetrics.hpp"
#include "core/text.hpp"

namespace musekit {

const char* cc_error_reason_name(CcErrorReason r) {
  switch (r) {
    case CcErrorReason::MissingS:
      return "missing_S";
    case CcErrorReason::WrongECount:
      return "wrong_E_count";
    case CcErrorReason::BadValue:
      return "bad_value";
    case CcErrorReason::ValueOutOfRange:
      return "value_out_of_range";
    case CcErrorReason::SectionCountMismatch:
      return "section_count_mismatch";
  }
  return "bad_value";
}

namespace {

CcParseResult cc_fail(CcErrorReason reason, std::string msg) {
  return CcParseResult{std::nullopt, CcError{reason, std::move(msg)}};
}

struct Field {
  char key;
  int value;
};

std::optional<Field> parse_field(std::string_view f) {
  if (f.size() < 3 || f[1] != ':') return std::nullopt;
  char key = f[0];
  if (key != 'S' && key != 'B' && key != 'E') return std::nullopt;
  long long v = 0;
  for (char c : f.substr(2)) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
    if (v > 1000000) return std::nullopt;
  }
  return Field{key, static_cast<int>(v)};
}

}  // namespace

CcParseResult parse_control_code(std::string_view text) {
  std::vector<Field> fields;
  {
    std::string buf;
    for (size_t i = 0; i <= text.size(); ++i) {
      char c = i < text.size() ? text[i] : ' ';
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        if (!buf.empty()) {
          auto f = parse_field(buf);
          if (!f) return cc_fail(CcErrorReason::BadValue,
                                 "malformed field '" + buf + "'");
          fields.push_back(*f);
          buf.clear();
        }
      } else {
        buf += c;
      }
    }
  }
  if (fields.empty() || fields[0].key != 'S')
    return cc_fail(CcErrorReason::MissingS, "control code must start with S:");

  ControlCode cc;
  cc.num_sections = fields[0].value;
  if (cc.num_sections < 1)
    return cc_fail(CcErrorReason::ValueOutOfRange, "S value must be >= 1");

  std::vector<int> pending_e;
  bool saw_trailing_s = false;
  for (size_t i = 1; i < fields.size(); ++i) {
    const Field& f = fields[i];
    if (saw_trailing_s)
      return cc_fail(CcErrorReason::BadValue,
                     "fields after the trailing S echo");
    if (f.key == 'S') {
      if (f.value != cc.num_sections)
        return cc_fail(CcErrorReason::SectionCountMismatch,
                       "trailing S does not repeat the section count");
      saw_trailing_s = true;
      continue;
    }
    if (f.key == 'B') {
      size_t expected = cc.bars.size();  // n-th B needs n-1 E fields
      if (pending_e.size() != expected)
        return cc_fail(CcErrorReason::WrongECount,
                       "expected " + std::to_string(expected) +
                           " E fields before B #" +
                           std::to_string(cc.bars.size() + 1) + ", got " +
                           std::to_string(pending_e.size()));
      if (f.value < 1)
        return cc_fail(CcErrorReason::ValueOutOfRange, "B value must be >= 1");
      if (!cc.bars.empty()) cc.sims.push_back(pending_e);
      pending_e.clear();
      cc.bars.push_back(f.value);
      continue;
    }
    // E field
    if (f.value < 0 || f.value > 10)
      return cc_fail(CcErrorReason::ValueOutOfRange,
                     "E value must be in [0,10]");
    if (cc.bars.empty())
      return cc_fail(CcErrorReason::WrongECount, "E field before the first B");
    pending_e.push_back(f.value);
  }
  if (!pending_e.empty())
    return cc_fail(CcErrorReason::WrongECount,
                   "dangling E fields after the last B");
  if (static_cast<int>(cc.bars.size()) != cc.num_sections)
    return cc_fail(CcErrorReason::SectionCountMismatch,
                   "S says " + std::to_string(cc.num_sections) +
                       " sections, found " + std::to_string(cc.bars.size()) +
                       " B fields");
  return CcParseResult{std::move(cc), std::nullopt};
}

std::optional<CcError> validate_control_code(const ControlCode& cc) {
  if (cc.num_sections < 1)
    return CcError{CcErrorReason::ValueOutOfRange, "S value must be >= 1"};
  if (static_cast<int>(cc.bars.size()) != cc.num_sections)
    return CcError{CcErrorReason::SectionCountMismatch,
                   "bars length must equal the section count"};
  if (cc.sims.size() != cc.bars.size() - 1)
    return CcError{CcErrorReason::WrongECount,
                   "sims must have one row per section after the first"};
  for (size_t n = 0; n < cc.sims.size(); ++n) {
    if (cc.sims[n].size() != n + 1)
      return CcError{CcErrorReason::WrongECount,
                     "sims row " + std::to_string(n) + " must have " +
                         std::to_string(n + 1) + " entries"};
    for (int v : cc.sims[n])
      if (v < 0 || v > 10)
        return CcError{CcErrorReason::ValueOutOfRange,
                       "similarity values must be in [0,10]"};
  }
  for (int b : cc.bars)
    if (b < 1)
      return CcError{CcErrorReason::ValueOutOfRange, "B values must be >= 1"};
  return std::nullopt;
}

std::string serialize_control_code(const ControlCode& cc) {
  std::ostringstream out;
  out << "S:" << cc.num_sections;
  for (size_t i = 0; i < cc.bars.size(); ++i) {
    if (i > 0)
      for (int e : cc.sims[i - 1]) out << " E:" << e;
    out << " B:" << cc.bars[i];
  }
  return out.str();
}

int similarity_level_0_10(std::string_view a, std::string_view b) {
  size_t maxlen = std::max(a.size(), b.size());
  if (maxlen == 0) return 10;
  size_t d = edit_distance_str(a, b);
  // round-half-up of 10*(maxlen-d)/maxlen
  long long v = (20LL * static_cast<long long>(maxlen - d) +
                 static_cast<long long>(maxlen)) /
                (2LL * static_cast<long long>(maxlen));
  if (v < 0) v = 0;
  if (v > 10) v = 10;
  return static_cast<int>(v);
}

std::string section_compare_text(const std::vector<BodyToken>& section) {
  // Chord symbols, comments and line breaks are presentation, not melody;
  // they are dropped before comparison.
  std::string out;
  for (const auto& tok : section) {
    if (is<ChordSymbol>(tok) || is<Comment>(tok) || is<LineBreak>(tok))
      continue;
    if (!out.empty()) out += ' ';
    out += token_text(tok);
  }
  return out;
}

ControlCode compute_control_code(const Tune& tune) {
  auto sections = split_sections(tune);
  ControlCode cc;
  cc.num_sections = static_cast<int>(sections.size());

  std::vector<std::string> texts;
  for (size_t s = 0; s < sections.size(); ++s) {
    const auto& section = sections[s];
    int bars = 0;
    bool pending = false;  // current measure span has timed content
    for (const auto& tok : section) {
      if (is<Note>(tok) || is<Rest>(tok) || is<MultiNote>(tok)) {
        pending = true;
      } else if (is<Barline>(tok)) {
        if (pending) ++bars;
        pending = false;
      }
    }
    if (pending) ++bars;
    if (bars == 0)
      fail("empty_section",
           "section " + std::to_string(s + 1) + " has no timed tokens");
    cc.bars.push_back(bars);
    texts.push_back(section_compare_text(section));
  }
  for (size_t n = 1; n < texts.size(); ++n) {
    std::vector<int> row;
    for (size_t m = 0; m < n; ++m)
      row.push_back(similarity_level_0_10(texts[m], texts[n]));
    cc.sims.push_back(std::move(row));
  }
  return cc;
}

}  // namespace musekit
