#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <string>

#include "fixtures.hpp"
#include "musekit.h"

using nlohmann::json;

namespace {

struct CStr {
  char* p = nullptr;
  ~CStr() { mk_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct Doc {
  mk_doc* d = nullptr;
  ~Doc() { mk_doc_free(d); }
};

mk_error_info parse_failure(const char* text) {
  Doc doc;
  mk_error_info err{};
  mk_status st = mk_parse(text, &doc.d, &err);
  REQUIRE(st == MK_ERR_PARSE);
  REQUIRE(doc.d == nullptr);
  return err;
}

}  // namespace

TEST_CASE("version string is present") {
  REQUIRE(mk_version() != nullptr);
  CHECK(std::string(mk_version()) == "0.1.0");
}

TEST_CASE("parse and serialize round-trip through the C boundary") {
  for (const char* text : {fixtures::kWaltz, fixtures::kFig6}) {
    Doc doc;
    mk_error_info err{};
    REQUIRE(mk_parse(text, &doc.d, &err) == MK_OK);
    REQUIRE(doc.d != nullptr);

    CStr first;
    REQUIRE(mk_serialize(doc.d, &first.p, &err) == MK_OK);
    Doc again;
    REQUIRE(mk_parse(first.p, &again.d, &err) == MK_OK);
    CStr second;
    REQUIRE(mk_serialize(again.d, &second.p, &err) == MK_OK);
    CHECK(first.str() == second.str());
  }
}

TEST_CASE("parse failures carry kind and location") {
  mk_error_info err = parse_failure("K:C\nC D |\n");
  CHECK(err.code == MK_ERR_PARSE);
  CHECK(std::string(err.kind) == "missing_X_header");
  CHECK(err.line == 1);
  CHECK(err.column == 1);
  CHECK(err.message[0] != '\0');

  err = parse_failure("X:1\nK:C\n\"F C |\n");
  CHECK(std::string(err.kind) == "unbalanced_quote");
  CHECK(err.line == 3);
}

TEST_CASE("null arguments are rejected without crashing") {
  Doc doc;
  mk_error_info err{};
  CHECK(mk_parse(nullptr, &doc.d, &err) == MK_ERR_INVALID_ARG);
  CHECK(mk_parse("X:1\nK:C\nC |\n", nullptr, &err) == MK_ERR_INVALID_ARG);
  CHECK(std::string(err.kind) == "invalid_arg");
  CStr out;
  CHECK(mk_serialize(nullptr, &out.p, &err) == MK_ERR_INVALID_ARG);
  int n = 0;
  CHECK(mk_section_count(nullptr, &n, &err) == MK_ERR_INVALID_ARG);
  CHECK(mk_eval_records(nullptr, &out.p, &err) == MK_ERR_INVALID_ARG);
  long long tokens = 0;
  CHECK(mk_count_tokens(nullptr, nullptr, nullptr, &tokens, &err) ==
        MK_ERR_INVALID_ARG);
  mk_string_free(nullptr);  // must be a no-op
  mk_doc_free(nullptr);
}

TEST_CASE("a null error out-param is allowed") {
  Doc doc;
  CHECK(mk_parse("not abc", &doc.d, nullptr) == MK_ERR_PARSE);
  CHECK(mk_parse(fixtures::kWaltz, &doc.d, nullptr) == MK_OK);
}

TEST_CASE("tunebook splitting returns a JSON array of chunks") {
  CStr out;
  mk_error_info err{};
  REQUIRE(mk_split_tunebook("X:1\nK:C\nC |\n\nX:2\nK:D\nD |\n", &out.p,
                            &err) == MK_OK);
  json arr = json::parse(out.str());
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 2);
  CHECK(arr[0].get<std::string>() == "X:1\nK:C\nC |\n");
  CHECK(arr[1].get<std::string>() == "X:2\nK:D\nD |\n");
}

TEST_CASE("analysis entry points agree with the fixtures") {
  Doc doc;
  mk_error_info err{};
  REQUIRE(mk_parse(fixtures::kFig6, &doc.d, &err) == MK_OK);

  int sections = 0;
  REQUIRE(mk_section_count(doc.d, &sections, &err) == MK_OK);
  CHECK(sections == 2);

  CStr chords;
  REQUIRE(mk_chords(doc.d, &chords.p, &err) == MK_OK);
  json chord_arr = json::parse(chords.str());
  REQUIRE(chord_arr.is_array());
  CHECK(chord_arr.size() == 25);
  CHECK(chord_arr[0] == "F");
  CHECK(chord_arr[1] == "C7");
  CHECK(chord_arr[2] == "F");
  CHECK(chord_arr[3] == "C7");

  CStr motifs;
  REQUIRE(mk_motifs(doc.d, &motifs.p, &err) == MK_OK);
  json motif_arr = json::parse(motifs.str());
  REQUIRE(motif_arr.is_array());
  REQUIRE(motif_arr.size() == 2);
  for (const auto& m : motif_arr) {
    CHECK(m.is_string());
    CHECK(!m.get<std::string>().empty());
  }

  CStr control;
  REQUIRE(mk_control_code(doc.d, &control.p, &err) == MK_OK);
  CHECK(control.str().rfind("S:2 B:", 0) == 0);

  CStr stripped;
  REQUIRE(mk_strip_chords(doc.d, &stripped.p, &err) == MK_OK);
  CHECK(stripped.str().find('"') == std::string::npos);
  CHECK(stripped.str().rfind("X:1\n", 0) == 0);

  double whole = 0, seconds = 0, qpm = 0;
  REQUIRE(mk_duration(doc.d, &whole, &seconds, &qpm, &err) == MK_OK);
  CHECK(whole > 0.0);
  CHECK(seconds > 0.0);
  CHECK(qpm == 120.0);
}

TEST_CASE("duration of a note-free body is a typed error") {
  Doc doc;
  mk_error_info err{};
  REQUIRE(mk_parse("X:1\nK:C\n| |\n", &doc.d, &err) == MK_OK);
  double whole = 0, seconds = 0, qpm = 0;
  CHECK(mk_duration(doc.d, &whole, &seconds, &qpm, &err) ==
        MK_ERR_INVALID_ARG);
  CHECK(std::string(err.kind) == "zero_duration");
}

TEST_CASE("form analysis produces the three expected fields") {
  Doc doc;
  mk_error_info err{};
  REQUIRE(mk_parse("X:1\nK:C\nC D E F |] C D E F |]\n", &doc.d, &err) ==
          MK_OK);
  CStr out;
  REQUIRE(mk_form_analyze(doc.d, &out.p, &err) == MK_OK);
  json j = json::parse(out.str());
  CHECK(j["alphabetic"] == "AA");
  CHECK(j["terms"] == json::array({"Variational"}));
  CHECK(j["control_code"].get<std::string>().rfind("S:2", 0) == 0);
}

TEST_CASE("token counting supports the built-in modes") {
  mk_error_info err{};
  long long n = 0;
  REQUIRE(mk_count_tokens("abc def", nullptr, nullptr, &n, &err) == MK_OK);
  CHECK(n == 7);
  REQUIRE(mk_count_tokens("abc def", nullptr, "bytes", &n, &err) == MK_OK);
  CHECK(n == 7);
  REQUIRE(mk_count_tokens("abc def", nullptr, "whitespace", &n, &err) ==
          MK_OK);
  CHECK(n == 2);
  CHECK(mk_count_tokens("abc", nullptr, "bpe", &n, &err) ==
        MK_ERR_INVALID_ARG);
  CHECK(std::string(err.kind) == "bad_config");
  CHECK(mk_count_tokens("abc", nullptr, "sonnets", &n, &err) ==
        MK_ERR_INVALID_ARG);
}

TEST_CASE("corpus statistics report totals, rates and failures") {
  std::string good = fixtures::write_temp(
      "capi_corpus_good.abc", "X:1\nL:1/4\nK:C\nC D E F |\n");
  std::string mixed = fixtures::write_temp(
      "capi_corpus_mixed.abc",
      "X:1\nL:1/4\nK:C\nC D E F |\n\nK:D\nD E |\n");

  const char* good_paths[] = {good.c_str()};
  CStr out;
  mk_error_info err{};
  REQUIRE(mk_corpus_stats(good_paths, 1, nullptr, "whitespace", 1, &out.p,
                          &err) == MK_OK);
  json stats = json::parse(out.str());
  CHECK(stats["songs"] == 1);
  CHECK(stats["total_tokens"] == 8);
  CHECK(stats["total_seconds"] == 2.0);
  CHECK(stats["tokens_per_song"] == 8.0);
  CHECK(stats["tokens_per_second"] == 4.0);
  CHECK(stats["failures"].empty());

  const char* mixed_paths[] = {mixed.c_str()};
  CStr out2;
  REQUIRE(mk_corpus_stats(mixed_paths, 1, nullptr, "whitespace", 1, &out2.p,
                          &err) == MK_OK);
  json stats2 = json::parse(out2.str());
  CHECK(stats2["songs"] == 1);
  REQUIRE(stats2["failures"].size() == 1);
  CHECK(stats2["failures"][0]["tune_index"] == 1);
  CHECK(stats2["failures"][0]["error"]["kind"] == "missing_X_header");

  const char* missing[] = {"/nonexistent/corpus.abc"};
  CStr out3;
  CHECK(mk_corpus_stats(missing, 1, nullptr, nullptr, 1, &out3.p, &err) ==
        MK_ERR_IO);
  CHECK(std::string(err.kind) == "io_error");
}

TEST_CASE("parse reports cover every tune in order") {
  std::string path = fixtures::write_temp(
      "capi_report.abc", "X:1\nK:C\nC |\n\nK:D\nD |\n\nX:3\nK:E\nE |\n");
  const char* paths[] = {path.c_str()};
  CStr out;
  mk_error_info err{};
  REQUIRE(mk_parse_report(paths, 1, 1, &out.p, &err) == MK_OK);
  json arr = json::parse(out.str());
  REQUIRE(arr.size() == 3);
  CHECK(arr[0]["ok"] == true);
  CHECK(arr[1]["ok"] == false);
  CHECK(arr[1]["error"]["kind"] == "missing_X_header");
  CHECK(arr[2]["ok"] == true);
  CHECK(arr[2]["tune_index"] == 2);
}

TEST_CASE("dataset generation emits chat samples and a summary") {
  json input;
  input["id"] = "t1";
  input["abc"] = fixtures::kFig6;
  std::string jsonl = input.dump() + "\n";

  CStr out;
  CStr summary;
  mk_error_info err{};
  REQUIRE(mk_generate_dataset(jsonl.c_str(), "chord_conditioned", 7, nullptr,
                              &out.p, &summary.p, &err) == MK_OK);
  json s = json::parse(summary.str());
  CHECK(s["records"] == 1);
  CHECK(s["written"] == 1);
  CHECK(s["skipped"].empty());

  std::string line = out.str();
  REQUIRE(!line.empty());
  json sample = json::parse(line);
  CHECK(sample["task"] == "chord_conditioned");
  CHECK(sample["source_id"] == "t1");
  REQUIRE(sample["messages"].size() == 2);
  CHECK(sample["messages"][0]["role"] == "user");
  CHECK(sample["messages"][1]["role"] == "assistant");

  CStr out2;
  CStr summary2;
  CHECK(mk_generate_dataset(jsonl.c_str(), "interpretive_dance", 7, nullptr,
                            &out2.p, &summary2.p, &err) ==
        MK_ERR_INVALID_ARG);
  CHECK(std::string(err.kind) == "bad_config");
}

TEST_CASE("evaluation reports flow through the C API") {
  json rec;
  rec["system"] = "s";
  rec["task"] = "chord_conditioned";
  rec["generated"] = "X:1\nK:C\n\"F\" C \"C7\" D |\n";
  rec["prompt_signals"] = {{"chords", {"F", "C7"}}};
  json rec2 = rec;
  rec2["generated"] = "X:1\nK:C\n\"F\" C \"G\" D |\n";
  std::string jsonl = rec.dump() + "\n" + rec2.dump() + "\n";

  CStr out;
  mk_error_info err{};
  REQUIRE(mk_eval_records(jsonl.c_str(), &out.p, &err) == MK_OK);
  json report = json::parse(out.str());
  CHECK(report["systems"]["s"]["chord_conditioned"]["n"] == 2);
  CHECK(report["memorization"]["n"] == 0);

  CStr bad;
  CHECK(mk_eval_records("not json\n", &bad.p, &err) == MK_ERR_INVALID_ARG);
  CHECK(std::string(err.kind) == "schema_error");
}

TEST_CASE("benchmark runs end to end against the gold stub") {
  json items = json::array();
  for (int i = 0; i < 4; ++i) {
    json item;
    item["id"] = "q" + std::to_string(i);
    item["subset"] = i % 2 == 0 ? "knowledge" : "reasoning";
    item["stem"] = "Stem " + std::to_string(i) + "?";
    item["options"] = {"w" + std::to_string(i), "x" + std::to_string(i),
                       "y" + std::to_string(i), "z" + std::to_string(i)};
    item["answer_index"] = i % 4;
    items.push_back(item);
  }
  std::string bench = fixtures::write_temp("capi_bench.json", items.dump());

  CStr out;
  mk_error_info err{};
  REQUIRE(mk_bench_run(bench.c_str(), nullptr, nullptr, nullptr, 3, 11,
                       nullptr, &out.p, &err) == MK_OK);
  json result = json::parse(out.str());
  CHECK(result["mode"] == "zero_shot");
  CHECK(result["n_shuffles"] == 3);
  CHECK(result["seed"] == 11);
  CHECK(result["subsets"]["knowledge"]["accuracy"] == 1.0);
  CHECK(result["subsets"]["reasoning"]["accuracy"] == 1.0);
  CHECK(result["extraction_failure_count"] == 0);

  CStr bad;
  CHECK(mk_bench_run(fixtures::temp_path("missing_bench.json").c_str(),
                     nullptr, nullptr, nullptr, 3, 11, nullptr, &bad.p,
                     &err) == MK_ERR_IO);
  CHECK(mk_bench_run(bench.c_str(), nullptr, nullptr, "nine_shot", 3, 11,
                     nullptr, &bad.p, &err) == MK_ERR_INVALID_ARG);
  // five-shot without exemplars violates the protocol
  CHECK(mk_bench_run(bench.c_str(), nullptr, nullptr, "five_shot", 3, 11,
                     nullptr, &bad.p, &err) == MK_ERR_INVALID_ARG);

  std::string fixed_cfg = fixtures::write_temp(
      "capi_provider.json", R"({"kind": "stub_fixed", "letter": "A"})");
  CStr fixed_out;
  REQUIRE(mk_bench_run(bench.c_str(), nullptr, fixed_cfg.c_str(), nullptr, 2,
                       11, nullptr, &fixed_out.p, &err) == MK_OK);
  json fixed = json::parse(fixed_out.str());
  double acc = fixed["subsets"]["knowledge"]["accuracy"].get<double>();
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
}
