#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/abc.hpp"
#include "core/dataset.hpp"

namespace musekit {

// Conditioning signals carried by a generation prompt. Which ones must be
// present depends on the task being scored.
struct PromptSignals {
  std::optional<std::vector<std::string>> chords;
  std::optional<std::string> form_alpha;
  std::optional<std::vector<std::string>> form_terms;
  std::optional<std::string> motif;   // space-joined ABC body fragment
  std::optional<std::string> melody;  // full ABC text without chords
};

struct GenerationRecord {
  std::string system;
  TaskKind task = TaskKind::ChordConditioned;
  PromptSignals signals;
  std::string generated;
  std::optional<std::string> reference;
};

// Similarity-oriented score in [0,1]; higher is better. Unparseable
// generations score 0. Throws MkError("task_unsupported") for bach_style
// and the extraction tasks, MkError("signal_unavailable") when the task's
// prompt signal is missing or unusable.
double initial_score(const GenerationRecord& rec);

// Rank of `score` within `pool` (which includes the score itself):
// strictly-less count / (pool size - 1). Throws MkError("empty_pool")
// when the pool has fewer than two entries.
double percentile_of(double score, const std::vector<double>& pool);

// Per-system mean percentile for one task; the pool is every system's
// scores combined. Throws MkError("empty_pool") when that pool has fewer
// than two entries.
std::map<std::string, double> average_percentiles(
    const std::map<std::string, std::vector<double>>& scores_by_system);

// Fraction of texts whose parsed body contains at least one repeat
// barline (|:, :| or ::). Unparseable texts count as no-repeat; an empty
// list scores 0.
double repetition_rate(const std::vector<std::string>& texts);

struct ParseRateReport {
  double rate = 0.0;
  std::vector<std::pair<size_t, ParseError>> failures;
};

ParseRateReport parse_success_rate(const std::vector<std::string>& texts);

struct MemorizationReport {
  double exact_fraction = 0.0;
  double overlap80_fraction = 0.0;  // includes exact matches
  size_t n = 0;
};

// Pairs are (generated tokens, reference tokens). exact = identical
// sequences; overlap80 = lcs/max(lengths) >= 0.8, where two empty
// sequences count as ratio 1. Throws MkError("empty_pool") on an empty
// pair list.
MemorizationReport memorization_report(
    const std::vector<std::pair<std::vector<std::string>,
                                std::vector<std::string>>>& pairs);

// Token stream for memorization comparison: body token texts when the
// text parses (line breaks and comments dropped), whitespace-split words
// otherwise.
std::vector<std::string> memorization_tokens(const std::string& text);

// Full pipeline over records JSONL: one object per line with "system",
// "task", "generated", optional "reference" and "prompt_signals".
// Returns the report JSON; throws MkError("schema_error") on malformed
// records. Tasks without a percentile metric (and pools of fewer than
// two scores) report avg_percentile as null.
std::string eval_records(std::string_view records_jsonl);

}  // namespace musekit
