#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace musekit {

enum class McqSubset { Knowledge, Reasoning };
enum class McqLanguage { En, Zh };
enum class PromptMode { ZeroShot, FiveShot };

const char* subset_name(McqSubset s);
const char* prompt_mode_name(PromptMode m);
std::optional<PromptMode> parse_prompt_mode(std::string_view name);

struct McqItem {
  std::string id;
  McqSubset subset = McqSubset::Knowledge;
  std::string stem;  // may embed ABC lines
  std::array<std::string, 4> options;
  int answer_index = 0;
  McqLanguage language = McqLanguage::En;
};

// JSON array of items: {"id","subset","stem","options","answer_index",
// "language"?}. Options must be unique, ids unique across the file.
// Throws MkError("schema_error") naming the item and field.
std::vector<McqItem> load_bench(const std::string& path);
std::vector<McqItem> parse_bench(std::string_view json_text);

// Options appear as A-D in permuted order: slot k shows
// item.options[perm[k]]. Exemplars render in original option order with
// their answer letter; the scored item's block ends with "Answer:".
// run_eval enforces the five-exemplar requirement for five-shot mode;
// this function formats whatever it is given.
std::string format_prompt(const McqItem& item, const std::array<int, 4>& perm,
                          PromptMode mode,
                          const std::vector<McqItem>& exemplars);

// First standalone uppercase A-D (neighbors are non-alphanumeric or
// string boundaries); nullopt when absent.
std::optional<char> extract_choice(std::string_view response);

// Permutation for (item index, round), derived only from the seed.
std::array<int, 4> shuffle_permutation(uint64_t seed, int round,
                                       size_t item_index);

struct ItemContext {
  std::string item_id;
  int round = 0;
  char gold_letter = 'A';  // letter the gold option landed on
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string complete(const std::string& prompt,
                               const ItemContext& ctx) = 0;
};

struct ProviderConfig {
  std::string kind = "stub_gold";  // http | stub_gold | stub_fixed | stub_random
  // http:
  std::string base_url;
  std::string path = "/complete";
  std::string model;
  int max_tokens = 256;
  int timeout_ms = 30000;
  int max_retries = 2;
  std::string auth_header = "Authorization";
  std::string auth_env;  // env var holding the header value
  // stub_fixed:
  char letter = 'A';
  // optional instruction prefix prepended to every prompt
  std::string prompt_prefix;
};

// JSON object mirroring ProviderConfig; unknown kinds are rejected.
// Throws MkError("bad_config").
ProviderConfig load_provider_config(const std::string& path);
ProviderConfig parse_provider_config(std::string_view json_text);

// stub_random draws from (seed, item id, round) only.
std::unique_ptr<Provider> make_provider(const ProviderConfig& config,
                                        uint64_t seed);

struct BenchOptions {
  int n_shuffles = 5;
  uint64_t seed = 0;
  PromptMode mode = PromptMode::ZeroShot;
  std::string checkpoint_path;  // empty disables checkpointing
  std::string prompt_prefix;
};

struct SubsetResult {
  double accuracy = 0.0;
  size_t n = 0;  // items in the subset
  std::vector<double> per_shuffle;
};

struct BenchResult {
  std::map<std::string, SubsetResult> subsets;
  size_t extraction_failure_count = 0;
  // echoed run metadata
  std::string mode;
  int n_shuffles = 5;
  uint64_t seed = 0;
  double temperature = 0.0;
};

// Asks the provider once per (item, round) pair, extraction failures
// scored incorrect. Completed pairs are appended to the checkpoint file
// as {"item_id","round","letter"} lines and skipped on resume, so an
// interrupted run finishes to the identical result. Throws
// MkError("provider_error") when the provider gives up;
// MkError("bad_config") on option violations (five-shot without exactly
// five exemplars, n_shuffles < 1).
BenchResult run_eval(const std::vector<McqItem>& items, Provider& provider,
                     const BenchOptions& options,
                     const std::vector<McqItem>& exemplars = {});

std::string bench_result_json(const BenchResult& result);

}  // namespace musekit
