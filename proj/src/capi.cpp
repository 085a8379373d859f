#include "musekit.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core/abc.hpp"
#include "core/analysis.hpp"
#include "core/bench.hpp"
#include "core/control.hpp"
#include "core/dataset.hpp"
#include "core/errors.hpp"
#include "core/evalmetrics.hpp"
#include "core/text.hpp"
#include "core/tokenize.hpp"

struct mk_doc {
  musekit::Tune tune;
};

namespace {

using namespace musekit;

void set_error(mk_error_info* err, mk_status code, const std::string& kind,
               int line, int column, const std::string& message) {
  if (!err) return;
  err->code = code;
  std::snprintf(err->kind, sizeof(err->kind), "%s", kind.c_str());
  err->line = line;
  err->column = column;
  std::snprintf(err->message, sizeof(err->message), "%s", message.c_str());
}

mk_status code_for_kind(const std::string& kind) {
  if (kind == "io_error") return MK_ERR_IO;
  if (kind == "task_unsupported") return MK_ERR_UNSUPPORTED;
  if (kind == "provider_error") return MK_ERR_PROVIDER;
  return MK_ERR_INVALID_ARG;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

mk_status invalid_arg(mk_error_info* err, const std::string& message) {
  set_error(err, MK_ERR_INVALID_ARG, "invalid_arg", 0, 0, message);
  return MK_ERR_INVALID_ARG;
}

// Runs the body, mapping exceptions onto status codes at the boundary.
template <class F>
mk_status guard(mk_error_info* err, F&& body) {
  try {
    return body();
  } catch (const MkError& e) {
    mk_status code = code_for_kind(e.kind);
    set_error(err, code, e.kind, 0, 0, e.what());
    return code;
  } catch (const std::exception& e) {
    set_error(err, MK_ERR_INTERNAL, "internal", 0, 0, e.what());
    return MK_ERR_INTERNAL;
  } catch (...) {
    set_error(err, MK_ERR_INTERNAL, "internal", 0, 0, "unknown error");
    return MK_ERR_INTERNAL;
  }
}

mk_status emit(char** out, const std::string& text, mk_error_info* err) {
  char* s = dup_string(text);
  if (!s) {
    set_error(err, MK_ERR_INTERNAL, "internal", 0, 0, "allocation failed");
    return MK_ERR_INTERNAL;
  }
  *out = s;
  return MK_OK;
}

nlohmann::ordered_json error_json(const ParseError& e) {
  nlohmann::ordered_json out;
  out["kind"] = parse_error_kind_name(e.kind);
  out["line"] = e.line;
  out["column"] = e.column;
  out["message"] = e.message;
  return out;
}

TokenizerSpec spec_from_args(const char* tokenizer_config, const char* mode) {
  if (tokenizer_config) return load_tokenizer_spec(tokenizer_config);
  if (!mode) return tokenizer_spec_from_mode("characters");
  if (std::string_view(mode) == "bpe")
    fail("bad_config", "bpe mode needs a tokenizer config file");
  return tokenizer_spec_from_mode(mode);
}

std::vector<std::string> path_vector(const char* const* paths, int n_paths) {
  if (!paths || n_paths < 1) fail("bad_config", "no input files given");
  std::vector<std::string> out;
  for (int i = 0; i < n_paths; ++i) {
    if (!paths[i]) fail("bad_config", "null path in file list");
    out.emplace_back(paths[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* mk_version(void) { return "0.1.0"; }

mk_status mk_parse(const char* text, mk_doc** out, mk_error_info* err) {
  if (!text || !out) return invalid_arg(err, "text and out must be non-null");
  *out = nullptr;
  return guard(err, [&]() -> mk_status {
    auto parsed = parse_tune(text);
    if (!parsed.ok()) {
      const auto& e = *parsed.error;
      set_error(err, MK_ERR_PARSE, parse_error_kind_name(e.kind), e.line,
                e.column, e.message);
      return MK_ERR_PARSE;
    }
    *out = new mk_doc{std::move(*parsed.tune)};
    return MK_OK;
  });
}

void mk_doc_free(mk_doc* doc) { delete doc; }

mk_status mk_serialize(const mk_doc* doc, char** out, mk_error_info* err) {
  if (!doc || !out) return invalid_arg(err, "doc and out must be non-null");
  return guard(err,
               [&]() -> mk_status { return emit(out, serialize(doc->tune), err); });
}

mk_status mk_split_tunebook(const char* text, char** out_json,
                            mk_error_info* err) {
  if (!text || !out_json)
    return invalid_arg(err, "text and out must be non-null");
  return guard(err, [&]() -> mk_status {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& chunk : split_tunebook(text)) arr.push_back(chunk);
    return emit(out_json, arr.dump(), err);
  });
}

mk_status mk_section_count(const mk_doc* doc, int* out, mk_error_info* err) {
  if (!doc || !out) return invalid_arg(err, "doc and out must be non-null");
  return guard(err, [&]() -> mk_status {
    *out = static_cast<int>(split_sections(doc->tune).size());
    return MK_OK;
  });
}

mk_status mk_chords(const mk_doc* doc, char** out_json, mk_error_info* err) {
  if (!doc || !out_json)
    return invalid_arg(err, "doc and out must be non-null");
  return guard(err, [&]() -> mk_status {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& chord : extract_chords(doc->tune)) arr.push_back(chord);
    return emit(out_json, arr.dump(), err);
  });
}

mk_status mk_motifs(const mk_doc* doc, char** out_json, mk_error_info* err) {
  if (!doc || !out_json)
    return invalid_arg(err, "doc and out must be non-null");
  return guard(err, [&]() -> mk_status {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& motif : extract_motifs_per_section(doc->tune)) {
      std::vector<std::string> parts;
      for (const auto& tok : motif) parts.push_back(token_text(tok));
      arr.push_back(join(parts, " "));
    }
    return emit(out_json, arr.dump(), err);
  });
}

mk_status mk_control_code(const mk_doc* doc, char** out, mk_error_info* err) {
  if (!doc || !out) return invalid_arg(err, "doc and out must be non-null");
  return guard(err, [&]() -> mk_status {
    return emit(out, serialize_control_code(compute_control_code(doc->tune)),
                err);
  });
}

mk_status mk_strip_chords(const mk_doc* doc, char** out, mk_error_info* err) {
  if (!doc || !out) return invalid_arg(err, "doc and out must be non-null");
  return guard(err, [&]() -> mk_status {
    return emit(out, serialize(strip_chords(doc->tune)), err);
  });
}

mk_status mk_duration(const mk_doc* doc, double* whole_notes, double* seconds,
                      double* qpm, mk_error_info* err) {
  if (!doc || !whole_notes || !seconds || !qpm)
    return invalid_arg(err, "doc and out-params must be non-null");
  return guard(err, [&]() -> mk_status {
    auto info = duration_info(doc->tune);
    *whole_notes = info.whole_note_total.to_double();
    *seconds = info.seconds.to_double();
    *qpm = info.tempo_qpm.to_double();
    return MK_OK;
  });
}

mk_status mk_form_analyze(const mk_doc* doc, char** out_json,
                          mk_error_info* err) {
  if (!doc || !out_json)
    return invalid_arg(err, "doc and out must be non-null");
  return guard(err, [&]() -> mk_status {
    auto cc = compute_control_code(doc->tune);
    auto form = alphabetic_form(cc);
    nlohmann::ordered_json out;
    out["control_code"] = serialize_control_code(cc);
    out["alphabetic"] = form.text();
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (auto term : terminology_forms(form))
      terms.push_back(form_term_name(term));
    out["terms"] = std::move(terms);
    return emit(out_json, out.dump(), err);
  });
}

mk_status mk_count_tokens(const char* text, const char* tokenizer_config,
                          const char* mode, long long* out,
                          mk_error_info* err) {
  if (!text || !out) return invalid_arg(err, "text and out must be non-null");
  return guard(err, [&]() -> mk_status {
    auto spec = spec_from_args(tokenizer_config, mode);
    *out = static_cast<long long>(count_tokens(text, spec));
    return MK_OK;
  });
}

mk_status mk_corpus_stats(const char* const* paths, int n_paths,
                          const char* tokenizer_config, const char* mode,
                          int jobs, char** out_json, mk_error_info* err) {
  if (!out_json) return invalid_arg(err, "out must be non-null");
  return guard(err, [&]() -> mk_status {
    auto spec = spec_from_args(tokenizer_config, mode);
    auto stats = corpus_stats(path_vector(paths, n_paths), spec,
                              jobs < 1 ? 1 : jobs);
    nlohmann::ordered_json out;
    out["songs"] = stats.songs;
    out["total_tokens"] = stats.total_tokens;
    out["total_seconds"] = stats.total_seconds.to_double();
    out["tokens_per_song"] = stats.tokens_per_song.to_double();
    out["tokens_per_second"] = stats.tokens_per_second.to_double();
    out["total_seconds_ratio"] = stats.total_seconds.str();
    out["tokens_per_song_ratio"] = stats.tokens_per_song.str();
    out["tokens_per_second_ratio"] = stats.tokens_per_second.str();
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const auto& f : stats.failures) {
      nlohmann::ordered_json fj;
      fj["file"] = f.file;
      fj["tune_index"] = f.tune_index;
      fj["error"] = error_json(f.error);
      failures.push_back(std::move(fj));
    }
    out["failures"] = std::move(failures);
    return emit(out_json, out.dump(), err);
  });
}

mk_status mk_parse_report(const char* const* paths, int n_paths, int jobs,
                          char** out_json, mk_error_info* err) {
  if (!out_json) return invalid_arg(err, "out must be non-null");
  return guard(err, [&]() -> mk_status {
    auto reports = parse_report(path_vector(paths, n_paths),
                                jobs < 1 ? 1 : jobs);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
      nlohmann::ordered_json rj;
      rj["file"] = r.file;
      rj["tune_index"] = r.tune_index;
      rj["ok"] = r.ok;
      if (!r.ok) rj["error"] = error_json(r.error);
      arr.push_back(std::move(rj));
    }
    return emit(out_json, arr.dump(), err);
  });
}

mk_status mk_generate_dataset(const char* input_jsonl, const char* tasks_csv,
                              unsigned long long seed,
                              const char* templates_path, char** out_jsonl,
                              char** out_summary_json, mk_error_info* err) {
  if (!input_jsonl || !out_jsonl || !out_summary_json)
    return invalid_arg(err, "input and out-params must be non-null");
  return guard(err, [&]() -> mk_status {
    DatasetOptions options;
    options.seed = seed;
    if (tasks_csv) {
      for (const auto& name : split(tasks_csv, ',')) {
        auto t = trim(name);
        if (t.empty()) continue;
        auto task = parse_task(t);
        if (!task) fail("bad_config", "unknown task '" + std::string(t) + "'");
        options.tasks.push_back(*task);
      }
      if (options.tasks.empty()) fail("bad_config", "empty task list");
    }
    if (templates_path) options.templates = load_templates(templates_path);

    auto result = generate_dataset(input_jsonl, options);
    nlohmann::ordered_json summary;
    summary["records"] = result.records;
    summary["written"] = result.written;
    nlohmann::ordered_json skipped = nlohmann::ordered_json::object();
    for (const auto& [key, count] : result.skipped) skipped[key] = count;
    summary["skipped"] = std::move(skipped);

    mk_status st = emit(out_jsonl, result.jsonl, err);
    if (st != MK_OK) return st;
    st = emit(out_summary_json, summary.dump(), err);
    if (st != MK_OK) {
      mk_string_free(*out_jsonl);
      *out_jsonl = nullptr;
    }
    return st;
  });
}

mk_status mk_eval_records(const char* records_jsonl, char** out_json,
                          mk_error_info* err) {
  if (!records_jsonl || !out_json)
    return invalid_arg(err, "records and out must be non-null");
  return guard(err, [&]() -> mk_status {
    return emit(out_json, eval_records(records_jsonl), err);
  });
}

mk_status mk_bench_run(const char* bench_path, const char* exemplars_path,
                       const char* provider_config_path, const char* mode,
                       int n_shuffles, unsigned long long seed,
                       const char* checkpoint_path, char** out_json,
                       mk_error_info* err) {
  if (!bench_path || !out_json)
    return invalid_arg(err, "bench_path and out must be non-null");
  return guard(err, [&]() -> mk_status {
    auto items = load_bench(bench_path);
    std::vector<McqItem> exemplars;
    if (exemplars_path) exemplars = load_bench(exemplars_path);

    ProviderConfig config;
    if (provider_config_path)
      config = load_provider_config(provider_config_path);

    BenchOptions options;
    options.n_shuffles = n_shuffles;
    options.seed = seed;
    options.prompt_prefix = config.prompt_prefix;
    if (mode) {
      auto m = parse_prompt_mode(mode);
      if (!m) fail("bad_config", "unknown mode '" + std::string(mode) + "'");
      options.mode = *m;
    }
    if (checkpoint_path) options.checkpoint_path = checkpoint_path;

    auto provider = make_provider(config, seed);
    auto result = run_eval(items, *provider, options, exemplars);
    return emit(out_json, bench_result_json(result), err);
  });
}

void mk_string_free(char* s) { std::free(s); }

}  // extern "C"
