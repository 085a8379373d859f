#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "core/abc.hpp"
#include "core/control.hpp"
#include "core/errors.hpp"
#include "fixtures.hpp"

using namespace musekit;

namespace {

constexpr const char* kGolden =
    "S:4 B:1 E:1 B:8 E:3 E:7 B:1 E:1 E:4 E:1 B:8";

ControlCode parse_cc_ok(const std::string& text) {
  CcParseResult r = parse_control_code(text);
  REQUIRE(r.ok());
  return *r.code;
}

CcErrorReason parse_cc_err(const std::string& text) {
  CcParseResult r = parse_control_code(text);
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.error.has_value());
  return r.error->reason;
}

}  // namespace

TEST_CASE("golden control code parses") {
  ControlCode cc = parse_cc_ok(kGolden);
  CHECK(cc.num_sections == 4);
  CHECK(cc.bars == std::vector<int>{1, 8, 1, 8});
  REQUIRE(cc.sims.size() == 3);
  CHECK(cc.sims[0] == std::vector<int>{1});
  CHECK(cc.sims[1] == std::vector<int>{3, 7});
  CHECK(cc.sims[2] == std::vector<int>{1, 4, 1});
}

TEST_CASE("golden control code serializes back to the same text") {
  ControlCode cc = parse_cc_ok(kGolden);
  CHECK(serialize_control_code(cc) == kGolden);
}

TEST_CASE("trailing section-count echo is accepted and never re-emitted") {
  ControlCode cc = parse_cc_ok(std::string(kGolden) + " S:4");
  CHECK(cc == parse_cc_ok(kGolden));
  CHECK(serialize_control_code(cc) == kGolden);
  CHECK(parse_cc_err(std::string(kGolden) + " S:5") ==
        CcErrorReason::SectionCountMismatch);
  // fields after the echo are malformed
  CHECK(parse_cc_err(std::string(kGolden) + " S:4 B:2") ==
        CcErrorReason::BadValue);
}

TEST_CASE("single section code has no similarity rows") {
  ControlCode cc = parse_cc_ok("S:1 B:12");
  CHECK(cc.num_sections == 1);
  CHECK(cc.bars == std::vector<int>{12});
  CHECK(cc.sims.empty());
  CHECK(serialize_control_code(cc) == "S:1 B:12");
}

TEST_CASE("whitespace between fields is flexible") {
  ControlCode cc = parse_cc_ok("  S:2\n B:4\tE:9  B:4 ");
  CHECK(cc.num_sections == 2);
  CHECK(cc.sims == std::vector<std::vector<int>>{{9}});
}

TEST_CASE("control code error taxonomy") {
  CHECK(parse_cc_err("B:3 E:1 B:3") == CcErrorReason::MissingS);
  CHECK(parse_cc_err("") == CcErrorReason::MissingS);
  CHECK(parse_cc_err("S:0 B:1") == CcErrorReason::ValueOutOfRange);
  CHECK(parse_cc_err("S:2 B:4 E:11 B:4") == CcErrorReason::ValueOutOfRange);
  CHECK(parse_cc_err("S:2 E:5 B:4 B:4") == CcErrorReason::WrongECount);
  CHECK(parse_cc_err("S:2 B:4 B:4") == CcErrorReason::WrongECount);
  CHECK(parse_cc_err("S:3 B:1 E:5 B:1 B:1") == CcErrorReason::WrongECount);
  CHECK(parse_cc_err("S:2 B:4 E:5 B:4 E:5") == CcErrorReason::WrongECount);
  CHECK(parse_cc_err("S:3 B:1 E:1 B:1") == CcErrorReason::SectionCountMismatch);
  CHECK(parse_cc_err("S:2 B:1 E:1 B:1 E:1 E:1 B:1") ==
        CcErrorReason::SectionCountMismatch);
  CHECK(parse_cc_err("S:2 X:4") == CcErrorReason::BadValue);
  CHECK(parse_cc_err("S:2 B:x") == CcErrorReason::BadValue);
  CHECK(parse_cc_err("S:two") == CcErrorReason::BadValue);
  CHECK(parse_cc_err("S:2 B:") == CcErrorReason::BadValue);
}

TEST_CASE("error reasons have stable names") {
  CHECK(std::string(cc_error_reason_name(CcErrorReason::MissingS)) ==
        "missing_S");
  CHECK(std::string(cc_error_reason_name(CcErrorReason::WrongECount)) ==
        "wrong_E_count");
  CHECK(std::string(cc_error_reason_name(CcErrorReason::BadValue)) ==
        "bad_value");
  CHECK(std::string(cc_error_reason_name(CcErrorReason::ValueOutOfRange)) ==
        "value_out_of_range");
  CHECK(std::string(
            cc_error_reason_name(CcErrorReason::SectionCountMismatch)) ==
        "section_count_mismatch");
}

TEST_CASE("validate_control_code checks shape") {
  ControlCode good;
  good.num_sections = 2;
  good.bars = {4, 4};
  good.sims = {{7}};
  CHECK_FALSE(validate_control_code(good).has_value());

  ControlCode bad = good;
  bad.sims = {{7, 3}};
  REQUIRE(validate_control_code(bad).has_value());
  CHECK(validate_control_code(bad)->reason == CcErrorReason::WrongECount);

  bad = good;
  bad.bars = {4};
  REQUIRE(validate_control_code(bad).has_value());
  CHECK(validate_control_code(bad)->reason ==
        CcErrorReason::SectionCountMismatch);

  bad = good;
  bad.sims = {{11}};
  REQUIRE(validate_control_code(bad).has_value());
  CHECK(validate_control_code(bad)->reason == CcErrorReason::ValueOutOfRange);

  bad = good;
  bad.bars = {4, 0};
  REQUIRE(validate_control_code(bad).has_value());
  CHECK(validate_control_code(bad)->reason == CcErrorReason::ValueOutOfRange);
}

TEST_CASE("similarity level rounds half up on the 0-10 scale") {
  CHECK(similarity_level_0_10("abcd", "abcf") == 8);  // 7.5 rounds up
  CHECK(similarity_level_0_10("same", "same") == 10);
  CHECK(similarity_level_0_10("", "") == 10);
  CHECK(similarity_level_0_10("abcd", "") == 0);
  CHECK(similarity_level_0_10("", "abcd") == 0);
  // distance 1 over length 20: 9.5 rounds to 10
  CHECK(similarity_level_0_10("aaaaaaaaaaaaaaaaaaaa",
                              "aaaaaaaaaaaaaaaaaaab") == 10);
  // distance 1 over length 4 with different lengths: d("abc","abcd")=1
  CHECK(similarity_level_0_10("abc", "abcd") == 8);
  CHECK(similarity_level_0_10("xy", "ab") == 0);
}

TEST_CASE("section compare text drops chords comments and line breaks") {
  Tune t = *parse_tune("X:1\nK:C\n\"F\" C D %hi\nE F |\n").tune;
  CHECK(section_compare_text(t.body) == "C D E F |");
}

TEST_CASE("compute control code counts bars between barlines") {
  Tune t = *parse_tune("X:1\nK:C\nC D | E F | G A |\n").tune;
  ControlCode cc = compute_control_code(t);
  CHECK(cc.num_sections == 1);
  CHECK(cc.bars == std::vector<int>{3});
  CHECK(cc.sims.empty());
}

TEST_CASE("trailing unbarred span counts as a bar") {
  Tune t = *parse_tune("X:1\nK:C\nC D | E F | G A\n").tune;
  CHECK(compute_control_code(t).bars == std::vector<int>{3});
}

TEST_CASE("identical sections compute similarity 10") {
  Tune t = *parse_tune("X:1\nK:C\nC D E F |] C D E F |]\n").tune;
  ControlCode cc = compute_control_code(t);
  REQUIRE(cc.num_sections == 2);
  REQUIRE(cc.sims.size() == 1);
  CHECK(cc.sims[0][0] == 10);
  CHECK(cc.bars == std::vector<int>{1, 1});
}

TEST_CASE("chord symbols do not affect computed similarity") {
  Tune plain = *parse_tune("X:1\nK:C\nC D E F |] C D E F |]\n").tune;
  Tune chorded =
      *parse_tune("X:1\nK:C\n\"C\" C D E F |]\"G\" C D E F |]\n").tune;
  CHECK(compute_control_code(plain) == compute_control_code(chorded));
}

TEST_CASE("computed control codes for the fixtures have two sections") {
  for (const char* fixture : {fixtures::kWaltz, fixtures::kFig6}) {
    Tune t = *parse_tune(fixture).tune;
    ControlCode cc = compute_control_code(t);
    CHECK(cc.num_sections == 2);
    CHECK(cc.bars.size() == 2);
    REQUIRE(cc.sims.size() == 1);
    CHECK(cc.sims[0][0] >= 0);
    CHECK(cc.sims[0][0] <= 10);
    CHECK_FALSE(validate_control_code(cc).has_value());
  }
}

TEST_CASE("computed codes round-trip through the string form") {
  Tune t = *parse_tune(fixtures::kWaltz).tune;
  ControlCode cc = compute_control_code(t);
  CcParseResult back = parse_control_code(serialize_control_code(cc));
  REQUIRE(back.ok());
  CHECK(*back.code == cc);
}
