#include "core/tokenize.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace musekit {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("io_error", "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail("io_error", "cannot read file: " + path);
  return ss.str();
}

TokenizerSpec tokenizer_spec_from_mode(std::string_view mode_name) {
  TokenizerSpec spec;
  if (mode_name == "bytes")
    spec.mode = TokenizerMode::Bytes;
  else if (mode_name == "characters")
    spec.mode = TokenizerMode::Characters;
  else if (mode_name == "whitespace")
    spec.mode = TokenizerMode::Whitespace;
  else if (mode_name == "bpe")
    spec.mode = TokenizerMode::Bpe;
  else
    fail("tokenizer_load", "unknown tokenizer mode: " + std::string(mode_name));
  return spec;
}

TokenizerSpec load_tokenizer_spec(const std::string& path) {
  std::string text = read_file(path);
  std::string mode, vocab, merges;
  int line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    std::string_view t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string_view::npos)
      fail("tokenizer_load", path + ":" + std::to_string(line_no) +
                                 ": expected key=value");
    std::string key(trim(t.substr(0, eq)));
    std::string value(trim(t.substr(eq + 1)));
    if (key == "mode")
      mode = value;
    else if (key == "vocab")
      vocab = value;
    else if (key == "merges")
      merges = value;
    else
      fail("tokenizer_load",
           path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  if (mode.empty()) fail("tokenizer_load", path + ": missing mode");
  TokenizerSpec spec = tokenizer_spec_from_mode(mode);
  auto resolve = [&](const std::string& p) -> std::string {
    std::filesystem::path fp(p);
    if (fp.is_absolute()) return p;
    return (std::filesystem::path(path).parent_path() / fp).string();
  };
  if (spec.mode == TokenizerMode::Bpe) {
    if (vocab.empty() || merges.empty())
      fail("tokenizer_load", path + ": bpe mode requires vocab= and merges=");
    spec.vocab_path = resolve(vocab);
    spec.merges_path = resolve(merges);
  } else if (!vocab.empty() || !merges.empty()) {
    fail("tokenizer_load",
         path + ": vocab/merges are only valid for bpe mode");
  }
  return spec;
}

BpeTokenizer BpeTokenizer::load(const std::string& vocab_path,
                                const std::string& merges_path) {
  std::string vocab_text = read_file(vocab_path);
  bool any_vocab = false;
  for (std::string_view line : split_lines(vocab_text))
    if (!trim(line).empty()) {
      any_vocab = true;
      break;
    }
  if (!any_vocab) fail("tokenizer_load", "empty vocab file: " + vocab_path);

  BpeTokenizer bpe;
  std::string merges_text = read_file(merges_path);
  size_t rank = 0;
  int line_no = 0;
  for (std::string_view line : split_lines(merges_text)) {
    ++line_no;
    std::string_view t = trim(line);
    if (t.empty()) continue;
    if (line_no == 1 && t.substr(0, 8) == "#version") continue;
    if (t[0] == '#') continue;
    size_t sp = t.find(' ');
    if (sp == std::string_view::npos || sp == 0 || sp + 1 >= t.size() ||
        t.find(' ', sp + 1) != std::string_view::npos)
      fail("tokenizer_load", merges_path + ":" + std::to_string(line_no) +
                                 ": merge line must be 'left right'");
    bpe.ranks_[{std::string(t.substr(0, sp)), std::string(t.substr(sp + 1))}] =
        rank++;
  }
  return bpe;
}

std::vector<std::string> BpeTokenizer::encode(std::string_view text) const {
  std::vector<std::string> symbols = utf8_split(text);
  if (symbols.size() < 2 || ranks_.empty()) return symbols;
  while (true) {
    size_t best_rank = SIZE_MAX;
    size_t best_pos = SIZE_MAX;
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = ranks_.find({symbols[i], symbols[i + 1]});
      if (it != ranks_.end() && it->second < best_rank) {
        best_rank = it->second;
        best_pos = i;
      }
    }
    if (best_pos == SIZE_MAX) break;
    symbols[best_pos] += symbols[best_pos + 1];
    symbols.erase(symbols.begin() + static_cast<long>(best_pos) + 1);
    if (symbols.size() < 2) break;
  }
  return symbols;
}

size_t BpeTokenizer::count(std::string_view text) const {
  return encode(text).size();
}

namespace {

size_t whitespace_count(std::string_view s) {
  size_t n = 0;
  bool in_token = false;
  for (char c : s) {
    bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!ws && !in_token) ++n;
    in_token = !ws;
  }
  return n;
}

}  // namespace

size_t count_tokens(std::string_view text, const TokenizerSpec& spec) {
  switch (spec.mode) {
    case TokenizerMode::Bytes:
      return text.size();
    case TokenizerMode::Characters:
      return utf8_count(text);
    case TokenizerMode::Whitespace:
      return whitespace_count(text);
    case TokenizerMode::Bpe: {
      BpeTokenizer bpe = BpeTokenizer::load(spec.vocab_path, spec.merges_path);
      return bpe.count(text);
    }
  }
  return 0;
}

namespace {

struct FileTunes {
  std::string file;
  std::vector<std::string> tunes;
};

// Reads and splits all files, preserving input order; files are independent
// so this is the parallel part.
std::vector<FileTunes> load_all(const std::vector<std::string>& paths,
                                int jobs) {
  std::vector<FileTunes> out(paths.size());
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      out[i].file = paths[i];
      out[i].tunes = split_tunebook(read_file(paths[i]));
    }
  };
  if (jobs <= 1 || paths.size() <= 1) {
    work(0, paths.size());
    return out;
  }
  size_t n_threads = std::min<size_t>(static_cast<size_t>(jobs), paths.size());
  std::vector<std::thread> threads;
  size_t chunk = (paths.size() + n_threads - 1) / n_threads;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (size_t t = 0; t < n_threads; ++t) {
    size_t b = t * chunk;
    size_t e = std::min(paths.size(), b + chunk);
    if (b >= e) break;
    threads.emplace_back([&, b, e] {
      try {
        work(b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace

CorpusStats corpus_stats(const std::vector<std::string>& paths,
                         const TokenizerSpec& spec, int jobs) {
  CorpusStats stats;
  stats.total_seconds = Rational(0);
  const BpeTokenizer bpe = spec.mode == TokenizerMode::Bpe
                               ? BpeTokenizer::load(spec.vocab_path,
                                                    spec.merges_path)
                               : BpeTokenizer();
  for (const auto& ft : load_all(paths, jobs)) {
    int tune_index = 0;
    for (const std::string& text : ft.tunes) {
      int index = tune_index++;
      ParseResult parsed = parse_tune(text);
      if (!parsed.ok()) {
        stats.failures.push_back({ft.file, index, *parsed.error});
        continue;
      }
      size_t tokens = spec.mode == TokenizerMode::Bpe
                          ? bpe.count(text)
                          : count_tokens(text, spec);
      Rational seconds;
      try {
        seconds = duration_info(*parsed.tune).seconds;
      } catch (const MkError&) {
        ParseError e;
        e.kind = ParseErrorKind::EmptyBody;
        e.message = "no timed tokens";
        stats.failures.push_back({ft.file, index, e});
        continue;
      }
      stats.songs += 1;
      stats.total_tokens += static_cast<long long>(tokens);
      stats.total_seconds += seconds;
    }
  }
  if (stats.songs == 0) {
    stats.tokens_per_song = Rational(0);
    stats.tokens_per_second = Rational(0);
    return stats;
  }
  stats.tokens_per_song = Rational(stats.total_tokens, stats.songs);
  stats.tokens_per_second = stats.total_seconds == Rational(0)
                                ? Rational(0)
                                : Rational(stats.total_tokens) /
                                      stats.total_seconds;
  return stats;
}

std::vector<FileParseReport> parse_report(const std::vector<std::string>& paths,
                                          int jobs) {
  std::vector<FileParseReport> out;
  for (const auto& ft : load_all(paths, jobs)) {
    int tune_index = 0;
    for (const std::string& text : ft.tunes) {
      FileParseReport rep;
      rep.file = ft.file;
      rep.tune_index = tune_index++;
      ParseResult parsed = parse_tune(text);
      rep.ok = parsed.ok();
      if (!rep.ok) rep.error = *parsed.error;
      out.push_back(std::move(rep));
    }
  }
  return out;
}

}  // namespace musekit
