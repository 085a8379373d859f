// Command-line front end. All functionality flows through the C API in
// musekit.h; JSON handling here is presentation only.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "musekit.h"

namespace {

int exit_code_for(mk_status st) {
  switch (st) {
    case MK_OK:
      return 0;
    case MK_ERR_PARSE:
    case MK_ERR_INVALID_ARG:
    case MK_ERR_UNSUPPORTED:
      return 1;
    default:
      return 2;  // IO, provider, internal
  }
}

[[noreturn]] void die(mk_status st, const mk_error_info& err) {
  std::cerr << "error [" << err.kind << "]";
  if (err.line > 0) std::cerr << " line " << err.line << " col " << err.column;
  std::cerr << ": " << err.message << "\n";
  std::exit(exit_code_for(st));
}

[[noreturn]] void die_usage(const std::string& message) {
  std::cerr << "error [bad_config]: " << message << "\n";
  std::exit(1);
}

[[noreturn]] void die_io(const std::string& message) {
  std::cerr << "error [io_error]: " << message << "\n";
  std::exit(2);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  mk_string_free(s);
  return out;
}

std::string read_file_or_die(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die_io("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_json(const std::string& text, bool pretty) {
  auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded())
    std::cout << text << "\n";
  else
    std::cout << j.dump(pretty ? 2 : -1) << "\n";
}

nlohmann::ordered_json error_to_json(const mk_error_info& err) {
  nlohmann::ordered_json out;
  out["kind"] = err.kind;
  out["line"] = err.line;
  out["column"] = err.column;
  out["message"] = err.message;
  return out;
}

std::vector<const char*> c_paths(const std::vector<std::string>& files) {
  std::vector<const char*> out;
  for (const auto& f : files) out.push_back(f.c_str());
  return out;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ABC music analysis, dataset generation and evaluation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  uint64_t seed = 0;
  int jobs = 1;
  bool pretty = false;
  app.add_option("--seed", seed, "seed for all randomized choices")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "parallel workers for file batches")
      ->capture_default_str();
  app.add_flag("--pretty", pretty, "indent JSON output");

  auto* cmd_parse =
      app.add_subcommand("parse", "parse ABC files, report per-tune outcomes");
  std::vector<std::string> parse_files;
  cmd_parse->add_option("files", parse_files, "ABC tunebook files")->required();

  auto* cmd_form =
      app.add_subcommand("form", "alphabetic and terminology form per tune");
  std::string form_file;
  cmd_form->add_option("file", form_file, "ABC tunebook file")->required();

  auto* cmd_motif =
      app.add_subcommand("motif", "per-section motifs of a single tune");
  std::string motif_file;
  cmd_motif->add_option("file", motif_file, "single-tune ABC file")->required();

  auto* cmd_gen =
      app.add_subcommand("gen", "generate instruction samples from a corpus");
  std::string gen_input, gen_tasks, gen_templates, gen_out;
  cmd_gen->add_option("input", gen_input, "corpus JSONL ({\"id\",\"abc\"} lines)")
      ->required();
  cmd_gen->add_option("--tasks", gen_tasks, "comma-separated task filter");
  cmd_gen->add_option("--templates", gen_templates, "template bank file");
  cmd_gen->add_option("--out", gen_out, "write samples here (summary to stdout)");

  auto* cmd_eval =
      app.add_subcommand("eval", "score generation records, emit metrics report");
  std::string eval_input;
  cmd_eval->add_option("records", eval_input, "generation records JSONL")
      ->required();

  auto* cmd_bench =
      app.add_subcommand("bench", "run a multiple-choice benchmark");
  std::string bench_file, bench_provider, bench_exemplars, bench_checkpoint;
  std::string bench_mode = "zero_shot";
  int bench_shuffles = 5;
  cmd_bench->add_option("bench", bench_file, "bench item JSON file")->required();
  cmd_bench->add_option("--provider", bench_provider,
                        "provider config JSON (default: gold-answer stub)");
  cmd_bench->add_option("--exemplars", bench_exemplars,
                        "held-out exemplar JSON (required for five_shot)");
  cmd_bench->add_option("--mode", bench_mode, "zero_shot or five_shot")
      ->capture_default_str();
  cmd_bench->add_option("--shuffles", bench_shuffles, "option shuffle rounds")
      ->capture_default_str();
  cmd_bench->add_option("--checkpoint", bench_checkpoint,
                        "progress JSONL enabling resumption");

  auto* cmd_stats =
      app.add_subcommand("stats", "tokens per song / per second over a corpus");
  std::vector<std::string> stats_files;
  std::string stats_tokenizer, stats_mode;
  cmd_stats->add_option("files", stats_files, "ABC tunebook files")->required();
  cmd_stats->add_option("--tokenizer", stats_tokenizer,
                        "tokenizer config file (mode=..., vocab=, merges=)");
  cmd_stats->add_option("--mode", stats_mode,
                        "bytes, characters or whitespace (default characters)");

  CLI11_PARSE(app, argc, argv);

  mk_error_info err{};

  if (cmd_parse->parsed()) {
    auto ptrs = c_paths(parse_files);
    char* out = nullptr;
    mk_status st = mk_parse_report(ptrs.data(), static_cast<int>(ptrs.size()),
                                   jobs, &out, &err);
    if (st != MK_OK) die(st, err);
    std::string json = take(out);
    print_json(json, pretty);
    for (const auto& e : nlohmann::json::parse(json))
      if (!e["ok"].get<bool>()) return 1;
    return 0;
  }

  if (cmd_form->parsed()) {
    std::string text = read_file_or_die(form_file);
    char* chunks_json = nullptr;
    mk_status st = mk_split_tunebook(text.c_str(), &chunks_json, &err);
    if (st != MK_OK) die(st, err);
    auto chunks = nlohmann::json::parse(take(chunks_json));

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    bool all_ok = true;
    for (size_t i = 0; i < chunks.size(); ++i) {
      nlohmann::ordered_json row;
      row["index"] = i;
      mk_doc* doc = nullptr;
      st = mk_parse(chunks[i].get<std::string>().c_str(), &doc, &err);
      if (st != MK_OK) {
        row["error"] = error_to_json(err);
        all_ok = false;
      } else {
        char* form_json = nullptr;
        st = mk_form_analyze(doc, &form_json, &err);
        if (st != MK_OK) {
          row["error"] = error_to_json(err);
          all_ok = false;
        } else {
          auto f = nlohmann::ordered_json::parse(take(form_json));
          row["alphabetic"] = f["alphabetic"];
          row["terms"] = f["terms"];
          row["control_code"] = f["control_code"];
        }
        mk_doc_free(doc);
      }
      rows.push_back(std::move(row));
    }
    std::cout << rows.dump(pretty ? 2 : -1) << "\n";
    return all_ok ? 0 : 1;
  }

  if (cmd_motif->parsed()) {
    std::string text = read_file_or_die(motif_file);
    mk_doc* doc = nullptr;
    mk_status st = mk_parse(text.c_str(), &doc, &err);
    if (st != MK_OK) die(st, err);
    char* motifs_json = nullptr;
    st = mk_motifs(doc, &motifs_json, &err);
    mk_doc_free(doc);
    if (st != MK_OK) die(st, err);
    for (const auto& m : nlohmann::json::parse(take(motifs_json)))
      std::cout << m.get<std::string>() << "\n";
    return 0;
  }

  if (cmd_gen->parsed()) {
    std::string input = read_file_or_die(gen_input);
    char* samples = nullptr;
    char* summary = nullptr;
    mk_status st =
        mk_generate_dataset(input.c_str(), opt(gen_tasks), seed,
                            opt(gen_templates), &samples, &summary, &err);
    if (st != MK_OK) die(st, err);
    std::string jsonl = take(samples);
    std::string sum = take(summary);
    if (!gen_out.empty()) {
      std::ofstream out(gen_out, std::ios::binary);
      if (!out) die_io("cannot write " + gen_out);
      out << jsonl;
      if (!out) die_io("cannot write " + gen_out);
      print_json(sum, pretty);
    } else {
      std::cout << jsonl;
      std::cerr << sum << "\n";
    }
    return 0;
  }

  if (cmd_eval->parsed()) {
    std::string input = read_file_or_die(eval_input);
    if (input.find_first_not_of(" \t\r\n") == std::string::npos)
      die_usage("records file is empty");
    char* report = nullptr;
    mk_status st = mk_eval_records(input.c_str(), &report, &err);
    if (st != MK_OK) die(st, err);
    print_json(take(report), pretty);
    return 0;
  }

  if (cmd_bench->parsed()) {
    char* result = nullptr;
    mk_status st = mk_bench_run(
        bench_file.c_str(), opt(bench_exemplars), opt(bench_provider),
        bench_mode.c_str(), bench_shuffles, seed, opt(bench_checkpoint),
        &result, &err);
    if (st != MK_OK) die(st, err);
    print_json(take(result), pretty);
    return 0;
  }

  if (cmd_stats->parsed()) {
    auto ptrs = c_paths(stats_files);
    char* out = nullptr;
    mk_status st = mk_corpus_stats(ptrs.data(), static_cast<int>(ptrs.size()),
                                   opt(stats_tokenizer), opt(stats_mode), jobs,
                                   &out, &err);
    if (st != MK_OK) die(st, err);
    std::string json = take(out);
    if (nlohmann::json::parse(json)["songs"].get<long long>() == 0)
      die_usage("corpus contains no parseable tunes");
    print_json(json, pretty);
    return 0;
  }

  return 0;
}
