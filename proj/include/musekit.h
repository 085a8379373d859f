#ifndef MUSEKIT_H
#define MUSEKIT_H

/* C interface to the musekit core: ABC parsing and analysis, instruction
 * dataset generation, generation metrics, and the multiple-choice benchmark
 * runner. All functions return mk_status; on failure the optional
 * mk_error_info out-param carries a stable error kind, a location when one
 * exists, and a human-readable message. Strings returned through char** are
 * heap-allocated; release them with mk_string_free. */

#include <stddef.h>

#if defined(_WIN32)
#define MK_API __declspec(dllexport)
#else
#define MK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mk_status {
  MK_OK = 0,
  MK_ERR_PARSE = 1,       /* ABC text rejected; kind names the defect */
  MK_ERR_IO = 2,          /* file unreadable or unwritable */
  MK_ERR_INVALID_ARG = 3, /* bad input, config, schema or state */
  MK_ERR_UNSUPPORTED = 4, /* operation undefined for this input */
  MK_ERR_PROVIDER = 5,    /* completion endpoint failed after retries */
  MK_ERR_INTERNAL = 6
} mk_status;

typedef struct mk_error_info {
  int code;          /* mk_status value */
  char kind[32];     /* stable machine-readable kind */
  int line;          /* 1-based; 0 when not applicable */
  int column;        /* 1-based; 0 when not applicable */
  char message[256]; /* truncated human-readable detail */
} mk_error_info;

/* Opaque parsed tune. */
typedef struct mk_doc mk_doc;

MK_API const char* mk_version(void);

/* ---- parsing and serialization ---- */

MK_API mk_status mk_parse(const char* text, mk_doc** out, mk_error_info* err);
MK_API void mk_doc_free(mk_doc* doc);
MK_API mk_status mk_serialize(const mk_doc* doc, char** out,
                              mk_error_info* err);

/* Splits tunebook text into per-tune chunks; out is a JSON array of
 * strings. */
MK_API mk_status mk_split_tunebook(const char* text, char** out_json,
                                   mk_error_info* err);

/* ---- analysis ---- */

MK_API mk_status mk_section_count(const mk_doc* doc, int* out,
                                  mk_error_info* err);

/* JSON array of chord symbol texts in body order. */
MK_API mk_status mk_chords(const mk_doc* doc, char** out_json,
                           mk_error_info* err);

/* JSON array with one space-joined motif per section. */
MK_API mk_status mk_motifs(const mk_doc* doc, char** out_json,
                           mk_error_info* err);

/* "S:n B:... E:..." text computed from the section structure. */
MK_API mk_status mk_control_code(const mk_doc* doc, char** out,
                                 mk_error_info* err);

/* Serialized ABC text with chord symbols removed. */
MK_API mk_status mk_strip_chords(const mk_doc* doc, char** out,
                                 mk_error_info* err);

/* Repeat-expanded length (whole notes), playing time (seconds), tempo
 * (quarter notes per minute). */
MK_API mk_status mk_duration(const mk_doc* doc, double* whole_notes,
                             double* seconds, double* qpm,
                             mk_error_info* err);

/* JSON object {"control_code", "alphabetic", "terms": [...]}. */
MK_API mk_status mk_form_analyze(const mk_doc* doc, char** out_json,
                                 mk_error_info* err);

/* ---- token statistics ---- */

/* Token count of one text. tokenizer_config (path) takes precedence over
 * mode ("bytes", "characters", "whitespace"); both NULL counts
 * characters. */
MK_API mk_status mk_count_tokens(const char* text,
                                 const char* tokenizer_config,
                                 const char* mode, long long* out,
                                 mk_error_info* err);

/* Tunebook corpus statistics across files; out is a JSON object with
 * songs, token and duration totals, per-song/per-second rates (double and
 * exact ratio forms) and per-tune parse failures. */
MK_API mk_status mk_corpus_stats(const char* const* paths, int n_paths,
                                 const char* tokenizer_config,
                                 const char* mode, int jobs, char** out_json,
                                 mk_error_info* err);

/* Per-tune parse outcomes across files; out is a JSON array. */
MK_API mk_status mk_parse_report(const char* const* paths, int n_paths,
                                 int jobs, char** out_json,
                                 mk_error_info* err);

/* ---- instruction dataset generation ---- */

/* input_jsonl: one {"id","abc","style"?} object per line. tasks_csv:
 * comma-separated task names or aliases, NULL for all tasks.
 * templates_path: template bank file, NULL for the built-in bank.
 * out_jsonl receives the chat-format samples; out_summary_json receives
 * {"records","written","skipped"}. */
MK_API mk_status mk_generate_dataset(const char* input_jsonl,
                                     const char* tasks_csv,
                                     unsigned long long seed,
                                     const char* templates_path,
                                     char** out_jsonl,
                                     char** out_summary_json,
                                     mk_error_info* err);

/* ---- generation metrics ---- */

/* records_jsonl: one {"system","task","prompt_signals","generated",
 * "reference"?} object per line. out is the metrics report JSON. */
MK_API mk_status mk_eval_records(const char* records_jsonl, char** out_json,
                                 mk_error_info* err);

/* ---- multiple-choice benchmark ---- */

/* bench_path: JSON array of items. exemplars_path: same schema, required
 * for five_shot mode (exactly 5). provider_config_path: JSON provider
 * description, NULL for the gold-answer stub. mode: "zero_shot" or
 * "five_shot". checkpoint_path: JSONL progress file enabling resumption,
 * NULL to disable. out is the BenchResult JSON. */
MK_API mk_status mk_bench_run(const char* bench_path,
                              const char* exemplars_path,
                              const char* provider_config_path,
                              const char* mode, int n_shuffles,
                              unsigned long long seed,
                              const char* checkpoint_path, char** out_json,
                              mk_error_info* err);

MK_API void mk_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* MUSEKIT_H */
