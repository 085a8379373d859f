#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace musekit {

enum class TaskKind {
  ChordConditioned,
  FormConditioned,
  AlphaFormMotifConditioned,
  TermFormMotifConditioned,
  MelodyHarmonization,
  BachStyle,
  MotifExtraction,
  FormExtraction,
};

inline constexpr int kNumTasks = 8;

const char* task_name(TaskKind task);

// Accepts the full snake_case name or a short alias
// (chord, form, alpha, term, melody, bach).
std::optional<TaskKind> parse_task(std::string_view name);

// Prompt templates per task. Placeholders are {CHORDS}, {MUSICAL_FORM_A},
// {MUSICAL_FORM_T}, {MOTIF}, {MELODY}, {MUSIC}; each task requires its own
// set exactly once (form_conditioned takes exactly one of the two form
// placeholders, bach_style takes none).
struct TemplateBank {
  std::map<TaskKind, std::vector<std::string>> by_task;
};

TemplateBank default_templates();

// Throws MkError("template_error") on a placeholder violation.
void validate_templates(const TemplateBank& bank);

// File format: one template per line, "task_name<TAB>template"; literal
// newlines/tabs/backslashes written as \n, \t, \\; blank lines and lines
// starting with # ignored. Tasks present in the file replace the base
// entry wholesale. Throws MkError("template_error") on malformed input.
TemplateBank load_templates(const std::string& path,
                            TemplateBank base = default_templates());

struct DatasetOptions {
  uint64_t seed = 0;
  std::vector<TaskKind> tasks;  // empty selects all tasks
  TemplateBank templates = default_templates();
};

// Input: JSONL, one object per line with "id" (string), "abc" (string)
// and optional "style" (string; "bach" marks eligible records for the
// bach_style task). Output: chat-format JSONL, one record per
// (input record, task) pair that survives the task's preconditions, in
// record-major order with tasks in enum order. `skipped` counts drops
// keyed "task_name/reason"; written plus total skips equals
// records * |tasks|.
struct DatasetResult {
  std::string jsonl;
  size_t records = 0;
  size_t written = 0;
  std::map<std::string, size_t> skipped;
};

DatasetResult generate_dataset(std::string_view input_jsonl,
                               const DatasetOptions& options);

}  // namespace musekit
