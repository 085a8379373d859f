#include "core/bench.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <httplib.h>
#include <json.hpp>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"
#include "core/tokenize.hpp"

namespace musekit {

namespace {

constexpr const char* kPreamble =
    "Read the following questions from the four options (A, B, C and D) "
    "given in each question. Choose the best option.";

}  // namespace

const char* subset_name(McqSubset s) {
  return s == McqSubset::Knowledge ? "knowledge" : "reasoning";
}

const char* prompt_mode_name(PromptMode m) {
  return m == PromptMode::ZeroShot ? "zero_shot" : "five_shot";
}

std::optional<PromptMode> parse_prompt_mode(std::string_view name) {
  if (name == "zero_shot" || name == "zero") return PromptMode::ZeroShot;
  if (name == "five_shot" || name == "five") return PromptMode::FiveShot;
  return std::nullopt;
}

std::vector<McqItem> parse_bench(std::string_view json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (!j.is_array())
    fail("schema_error", "bench file must be a JSON array of items");

  std::vector<McqItem> items;
  std::set<std::string> seen_ids;
  for (size_t idx = 0; idx < j.size(); ++idx) {
    const auto& e = j[idx];
    std::string where = "item #" + std::to_string(idx);
    if (!e.is_object()) fail("schema_error", where + ": not an object");
    if (!e.contains("id") || !e["id"].is_string())
      fail("schema_error", where + ": missing string field 'id'");
    McqItem item;
    item.id = e["id"].get<std::string>();
    const std::string at = "item '" + item.id + "'";
    if (!seen_ids.insert(item.id).second)
      fail("schema_error", at + ": duplicate id");

    if (!e.contains("subset") || !e["subset"].is_string())
      fail("schema_error", at + ": missing string field 'subset'");
    std::string subset = e["subset"].get<std::string>();
    if (subset == "knowledge")
      item.subset = McqSubset::Knowledge;
    else if (subset == "reasoning")
      item.subset = McqSubset::Reasoning;
    else
      fail("schema_error", at + ": subset must be knowledge or reasoning");

    if (!e.contains("stem") || !e["stem"].is_string())
      fail("schema_error", at + ": missing string field 'stem'");
    item.stem = e["stem"].get<std::string>();

    if (!e.contains("options") || !e["options"].is_array() ||
        e["options"].size() != 4)
      fail("schema_error", at + ": options must be an array of 4 strings");
    std::set<std::string> uniq;
    for (size_t k = 0; k < 4; ++k) {
      if (!e["options"][k].is_string())
        fail("schema_error", at + ": options must be an array of 4 strings");
      item.options[k] = e["options"][k].get<std::string>();
      if (!uniq.insert(item.options[k]).second)
        fail("schema_error", at + ": options must be unique");
    }

    if (!e.contains("answer_index") || !e["answer_index"].is_number_integer())
      fail("schema_error", at + ": missing integer field 'answer_index'");
    item.answer_index = e["answer_index"].get<int>();
    if (item.answer_index < 0 || item.answer_index > 3)
      fail("schema_error", at + ": answer_index must be in 0..3");

    if (e.contains("language")) {
      if (!e["language"].is_string())
        fail("schema_error", at + ": language must be a string");
      std::string lang = e["language"].get<std::string>();
      if (lang == "en")
        item.language = McqLanguage::En;
      else if (lang == "zh")
        item.language = McqLanguage::Zh;
      else
        fail("schema_error", at + ": language must be en or zh");
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<McqItem> load_bench(const std::string& path) {
  return parse_bench(read_file(path));
}

namespace {

std::string mcq_block(const McqItem& item, const std::array<int, 4>& order,
                      std::optional<char> answer) {
  std::string out = item.stem;
  for (int k = 0; k < 4; ++k) {
    out += '\n';
    out += static_cast<char>('A' + k);
    out += ". ";
    out += item.options[static_cast<size_t>(order[static_cast<size_t>(k)])];
  }
  out += "\nAnswer:";
  if (answer) {
    out += ' ';
    out += *answer;
  }
  return out;
}

constexpr std::array<int, 4> kIdentity = {0, 1, 2, 3};

}  // namespace

std::string format_prompt(const McqItem& item, const std::array<int, 4>& perm,
                          PromptMode mode,
                          const std::vector<McqItem>& exemplars) {
  std::string out = kPreamble;
  out += '\n';
  if (mode == PromptMode::FiveShot) {
    for (const auto& ex : exemplars) {
      out += mcq_block(ex, kIdentity,
                       static_cast<char>('A' + ex.answer_index));
      out += "\n\n";
    }
  }
  out += mcq_block(item, perm, std::nullopt);
  return out;
}

std::optional<char> extract_choice(std::string_view response) {
  auto alnum = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  };
  for (size_t i = 0; i < response.size(); ++i) {
    char c = response[i];
    if (c < 'A' || c > 'D') continue;
    if (i > 0 && alnum(response[i - 1])) continue;
    if (i + 1 < response.size() && alnum(response[i + 1])) continue;
    return c;
  }
  return std::nullopt;
}

std::array<int, 4> shuffle_permutation(uint64_t seed, int round,
                                       size_t item_index) {
  std::vector<int> v = {0, 1, 2, 3};
  Rng rng(mix_seed({seed, static_cast<uint64_t>(round),
                    static_cast<uint64_t>(item_index)}));
  rng.shuffle(v);
  return {v[0], v[1], v[2], v[3]};
}

ProviderConfig parse_provider_config(std::string_view json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (!j.is_object()) fail("bad_config", "provider config must be a JSON object");

  ProviderConfig cfg;
  auto str = [&](const char* key, std::string& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_string())
      fail("bad_config", std::string("provider config ") + key +
                             " must be a string");
    dst = j[key].get<std::string>();
  };
  auto num = [&](const char* key, int& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer())
      fail("bad_config", std::string("provider config ") + key +
                             " must be an integer");
    dst = j[key].get<int>();
  };
  str("kind", cfg.kind);
  str("base_url", cfg.base_url);
  str("path", cfg.path);
  str("model", cfg.model);
  num("max_tokens", cfg.max_tokens);
  num("timeout_ms", cfg.timeout_ms);
  num("max_retries", cfg.max_retries);
  str("auth_header", cfg.auth_header);
  str("auth_env", cfg.auth_env);
  str("prompt_prefix", cfg.prompt_prefix);
  if (j.contains("letter")) {
    if (!j["letter"].is_string() || j["letter"].get<std::string>().size() != 1)
      fail("bad_config", "provider config letter must be a 1-char string");
    cfg.letter = j["letter"].get<std::string>()[0];
    if (cfg.letter < 'A' || cfg.letter > 'D')
      fail("bad_config", "provider config letter must be A..D");
  }

  if (cfg.kind == "http") {
    if (cfg.base_url.empty() || cfg.model.empty())
      fail("bad_config", "http provider needs base_url and model");
    if (cfg.max_retries < 0) fail("bad_config", "max_retries must be >= 0");
    if (cfg.timeout_ms <= 0) fail("bad_config", "timeout_ms must be > 0");
  } else if (cfg.kind != "stub_gold" && cfg.kind != "stub_fixed" &&
             cfg.kind != "stub_random") {
    fail("bad_config", "unknown provider kind '" + cfg.kind + "'");
  }
  return cfg;
}

ProviderConfig load_provider_config(const std::string& path) {
  return parse_provider_config(read_file(path));
}

namespace {

class GoldStub : public Provider {
 public:
  std::string complete(const std::string&, const ItemContext& ctx) override {
    return std::string(1, ctx.gold_letter);
  }
};

class FixedStub : public Provider {
 public:
  explicit FixedStub(char letter) : letter_(letter) {}
  std::string complete(const std::string&, const ItemContext&) override {
    return std::string(1, letter_);
  }

 private:
  char letter_;
};

class RandomStub : public Provider {
 public:
  explicit RandomStub(uint64_t seed) : seed_(seed) {}
  std::string complete(const std::string&, const ItemContext& ctx) override {
    uint64_t h = mix_seed({seed_, fnv1a64(ctx.item_id),
                           static_cast<uint64_t>(ctx.round)});
    return std::string(1, static_cast<char>('A' + h % 4));
  }

 private:
  uint64_t seed_;
};

class HttpProvider : public Provider {
 public:
  explicit HttpProvider(const ProviderConfig& cfg) : cfg_(cfg) {
    if (!cfg_.auth_env.empty()) {
      const char* v = std::getenv(cfg_.auth_env.c_str());
      if (!v)
        fail("bad_config",
             "environment variable " + cfg_.auth_env + " is not set");
      auth_value_ = v;
    }
    client_ = std::make_unique<httplib::Client>(cfg_.base_url);
    client_->set_connection_timeout(0, cfg_.timeout_ms * 1000LL);
    client_->set_read_timeout(0, cfg_.timeout_ms * 1000LL);
    client_->set_write_timeout(0, cfg_.timeout_ms * 1000LL);
  }

  std::string complete(const std::string& prompt,
                       const ItemContext&) override {
    nlohmann::ordered_json req;
    req["model"] = cfg_.model;
    req["prompt"] = prompt;
    req["max_tokens"] = cfg_.max_tokens;
    req["temperature"] = 0;
    std::string body = req.dump();

    httplib::Headers headers;
    if (!auth_value_.empty()) headers.emplace(cfg_.auth_header, auth_value_);

    std::string last_error = "no attempts made";
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      auto res = client_->Post(cfg_.path, headers, body, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "HTTP status " + std::to_string(res->status);
        continue;
      }
      auto rj = nlohmann::json::parse(res->body, nullptr, false);
      if (!rj.is_object() || !rj.contains("text") || !rj["text"].is_string()) {
        last_error = "response body lacks a string 'text' field";
        continue;
      }
      return rj["text"].get<std::string>();
    }
    fail("provider_error", "provider gave up after " +
                               std::to_string(cfg_.max_retries + 1) +
                               " attempt(s): " + last_error);
  }

 private:
  ProviderConfig cfg_;
  std::string auth_value_;
  std::unique_ptr<httplib::Client> client_;
};

}  // namespace

std::unique_ptr<Provider> make_provider(const ProviderConfig& config,
                                        uint64_t seed) {
  if (config.kind == "stub_gold") return std::make_unique<GoldStub>();
  if (config.kind == "stub_fixed")
    return std::make_unique<FixedStub>(config.letter);
  if (config.kind == "stub_random") return std::make_unique<RandomStub>(seed);
  if (config.kind == "http") return std::make_unique<HttpProvider>(config);
  fail("bad_config", "unknown provider kind '" + config.kind + "'");
}

BenchResult run_eval(const std::vector<McqItem>& items, Provider& provider,
                     const BenchOptions& options,
                     const std::vector<McqItem>& exemplars) {
  if (options.n_shuffles < 1) fail("bad_config", "n_shuffles must be >= 1");
  if (options.mode == PromptMode::FiveShot && exemplars.size() != 5)
    fail("bad_config", "five_shot mode needs exactly 5 exemplars, got " +
                           std::to_string(exemplars.size()));

  // Permutations and gold letters are fixed up front so neither request
  // order nor resumption can perturb them.
  size_t n = items.size();
  int rounds = options.n_shuffles;
  std::vector<std::vector<std::array<int, 4>>> perms(n);
  std::vector<std::vector<char>> gold(n);
  for (size_t i = 0; i < n; ++i) {
    perms[i].resize(static_cast<size_t>(rounds));
    gold[i].resize(static_cast<size_t>(rounds), 'A');
    for (int r = 0; r < rounds; ++r) {
      auto perm = shuffle_permutation(options.seed, r, i);
      perms[i][static_cast<size_t>(r)] = perm;
      for (int k = 0; k < 4; ++k)
        if (perm[static_cast<size_t>(k)] == items[i].answer_index)
          gold[i][static_cast<size_t>(r)] = static_cast<char>('A' + k);
    }
  }

  // letter answered per (item id, round); nullopt = extraction failure.
  std::map<std::pair<std::string, int>, std::optional<char>> done;
  if (!options.checkpoint_path.empty() &&
      std::filesystem::exists(options.checkpoint_path)) {
    std::string text = read_file(options.checkpoint_path);
    for (const auto& line : split_lines(text)) {
      if (trim(line).empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      // Truncated or foreign lines are re-run rather than trusted.
      if (!j.is_object() || !j.contains("item_id") ||
          !j["item_id"].is_string() || !j.contains("round") ||
          !j["round"].is_number_integer() || !j.contains("letter"))
        continue;
      std::optional<char> letter;
      if (j["letter"].is_string() && j["letter"].get<std::string>().size() == 1)
        letter = j["letter"].get<std::string>()[0];
      else if (!j["letter"].is_null())
        continue;
      done[{j["item_id"].get<std::string>(), j["round"].get<int>()}] = letter;
    }
  }

  std::ofstream checkpoint;
  if (!options.checkpoint_path.empty()) {
    checkpoint.open(options.checkpoint_path, std::ios::app);
    if (!checkpoint)
      fail("io_error",
           "cannot open checkpoint file " + options.checkpoint_path);
  }

  for (int r = 0; r < rounds; ++r) {
    for (size_t i = 0; i < n; ++i) {
      std::pair<std::string, int> key{items[i].id, r};
      if (done.count(key)) continue;

      std::string prompt =
          options.prompt_prefix +
          format_prompt(items[i], perms[i][static_cast<size_t>(r)],
                        options.mode, exemplars);
      ItemContext ctx{items[i].id, r, gold[i][static_cast<size_t>(r)]};
      std::string response = provider.complete(prompt, ctx);
      std::optional<char> letter = extract_choice(response);
      done[key] = letter;

      if (checkpoint.is_open()) {
        nlohmann::ordered_json line;
        line["item_id"] = items[i].id;
        line["round"] = r;
        if (letter)
          line["letter"] = std::string(1, *letter);
        else
          line["letter"] = nullptr;
        checkpoint << line.dump() << "\n";
        checkpoint.flush();
      }
    }
  }

  BenchResult result;
  result.mode = prompt_mode_name(options.mode);
  result.n_shuffles = rounds;
  result.seed = options.seed;
  result.temperature = 0.0;

  for (McqSubset subset : {McqSubset::Knowledge, McqSubset::Reasoning}) {
    std::vector<size_t> members;
    for (size_t i = 0; i < n; ++i)
      if (items[i].subset == subset) members.push_back(i);
    if (members.empty()) continue;

    SubsetResult sr;
    sr.n = members.size();
    double total = 0.0;
    for (int r = 0; r < rounds; ++r) {
      size_t correct = 0;
      for (size_t i : members) {
        auto letter = done.at({items[i].id, r});
        if (letter && *letter == gold[i][static_cast<size_t>(r)]) ++correct;
      }
      double acc =
          static_cast<double>(correct) / static_cast<double>(members.size());
      sr.per_shuffle.push_back(acc);
      total += acc;
    }
    sr.accuracy = total / static_cast<double>(rounds);
    result.subsets[subset_name(subset)] = std::move(sr);
  }

  for (size_t i = 0; i < n; ++i)
    for (int r = 0; r < rounds; ++r)
      if (!done.at({items[i].id, r})) ++result.extraction_failure_count;

  return result;
}

std::string bench_result_json(const BenchResult& result) {
  nlohmann::ordered_json out;
  out["mode"] = result.mode;
  out["n_shuffles"] = result.n_shuffles;
  out["seed"] = result.seed;
  out["temperature"] = result.temperature;
  nlohmann::ordered_json subsets = nlohmann::ordered_json::object();
  for (const auto& [name, sr] : result.subsets) {
    nlohmann::ordered_json s;
    s["accuracy"] = sr.accuracy;
    s["n"] = sr.n;
    s["per_shuffle"] = sr.per_shuffle;
    subsets[name] = std::move(s);
  }
  out["subsets"] = std::move(subsets);
  out["extraction_failure_count"] = result.extraction_failure_count;
  return out.dump(2) + "\n";
}

}  // namespace musekit
