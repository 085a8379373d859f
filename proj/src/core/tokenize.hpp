#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/abc.hpp"
#include "core/rational.hpp"

namespace musekit {

enum class TokenizerMode { Bytes, Characters, Whitespace, Bpe };

struct TokenizerSpec {
  TokenizerMode mode = TokenizerMode::Characters;
  std::string vocab_path;   // bpe only
  std::string merges_path;  // bpe only
};

// Parses "mode=", "vocab=", "merges=" key=value lines. Relative vocab and
// merges paths are resolved against the config file's directory. Throws
// MkError "tokenizer_load" on malformed or inconsistent specs.
TokenizerSpec load_tokenizer_spec(const std::string& path);
TokenizerSpec tokenizer_spec_from_mode(std::string_view mode_name);

// Greedy lowest-rank byte-pair merges over UTF-8 codepoint symbols. Merging
// only ever shrinks the symbol count, so bpe counts never exceed character
// counts.
class BpeTokenizer {
 public:
  static BpeTokenizer load(const std::string& vocab_path,
                           const std::string& merges_path);
  size_t count(std::string_view text) const;
  std::vector<std::string> encode(std::string_view text) const;

 private:
  std::map<std::pair<std::string, std::string>, size_t> ranks_;
};

size_t count_tokens(std::string_view text, const TokenizerSpec& spec);

struct CorpusFailure {
  std::string file;
  int tune_index = 0;  // 0-based within the file
  ParseError error;
};

struct CorpusStats {
  Rational tokens_per_song;
  Rational tokens_per_second;
  long long songs = 0;
  long long total_tokens = 0;
  Rational total_seconds;
  std::vector<CorpusFailure> failures;  // unparseable tunes, excluded
};

// Reads each file as a tunebook (blank-line separated tunes), counts tokens
// of each tune's text and its repeat-expanded duration. Unparseable tunes
// are reported and excluded from the means. jobs > 1 parses files in
// parallel; aggregation order stays deterministic.
CorpusStats corpus_stats(const std::vector<std::string>& paths,
                         const TokenizerSpec& spec, int jobs = 1);

struct FileParseReport {
  std::string file;
  int tune_index = 0;
  bool ok = false;
  ParseError error;  // valid when !ok
};

std::vector<FileParseReport> parse_report(const std::vector<std::string>& paths,
                                          int jobs = 1);

std::string read_file(const std::string& path);  // MkError "io_error"

}  // namespace musekit
