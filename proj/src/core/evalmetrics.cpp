#include "core/evalmetrics.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "core/analysis.hpp"
#include "core/control.hpp"
#include "core/errors.hpp"
#include "core/seqmetrics.hpp"
#include "core/text.hpp"

namespace musekit {

namespace {

std::vector<std::string> body_token_texts(const Tune& tune,
                                          bool keep_chords) {
  std::vector<std::string> out;
  for (const auto& tok : tune.body) {
    if (is<LineBreak>(tok) || is<Comment>(tok)) continue;
    if (!keep_chords && is<ChordSymbol>(tok)) continue;
    out.push_back(token_text(tok));
  }
  return out;
}

// Parses a space-joined body fragment (a motif signal) by wrapping it in a
// minimal tune.
std::optional<std::vector<std::string>> parse_fragment_tokens(
    const std::string& fragment) {
  auto parsed = parse_tune("X:1\nK:C\n" + fragment + "\n");
  if (!parsed.ok()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& tok : filter_for_motif(parsed.tune->body))
    out.push_back(token_text(tok));
  return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  size_t inter = 0;
  for (const auto& x : a)
    if (b.count(x)) ++inter;
  size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::set<std::string> term_names(const AlphabeticForm& form) {
  std::set<std::string> out;
  for (auto term : terminology_forms(form)) out.insert(form_term_name(term));
  return out;
}

// Exact alphabetic match scores 1; otherwise Jaccard similarity between
// the prompt's terminology set (explicit, or derived from the alphabetic
// signal) and the generation's.
double form_similarity(const PromptSignals& signals, const Tune& gen) {
  std::optional<AlphabeticForm> gen_form;
  try {
    gen_form = alphabetic_form(compute_control_code(gen));
  } catch (const MkError&) {
    return 0.0;
  }

  if (signals.form_alpha && gen_form->text() == *signals.form_alpha)
    return 1.0;

  std::set<std::string> prompt_terms;
  if (signals.form_terms) {
    for (const auto& t : *signals.form_terms) prompt_terms.insert(t);
  } else if (signals.form_alpha) {
    auto prompt_form = parse_alpha(*signals.form_alpha);
    if (!prompt_form)
      fail("signal_unavailable",
           "form_alpha signal '" + *signals.form_alpha + "' is not a form");
    prompt_terms = term_names(*prompt_form);
  } else {
    fail("signal_unavailable", "form task needs form_alpha or form_terms");
  }
  return jaccard(prompt_terms, term_names(*gen_form));
}

double motif_similarity(const PromptSignals& signals, const Tune& gen) {
  if (!signals.motif)
    fail("signal_unavailable", "motif task needs a motif signal");
  auto prompt_tokens = parse_fragment_tokens(*signals.motif);
  if (!prompt_tokens || prompt_tokens->empty())
    fail("signal_unavailable",
         "motif signal '" + *signals.motif + "' is not a token sequence");

  std::vector<std::string> gen_tokens;
  try {
    for (const auto& tok : extract_motif(split_sections(gen).front()))
      gen_tokens.push_back(token_text(tok));
  } catch (const MkError&) {
    return 0.0;
  }
  return static_cast<double>(lcs_length(gen_tokens, *prompt_tokens)) /
         static_cast<double>(prompt_tokens->size());
}

double ratio_score(size_t dist, size_t len_a, size_t len_b) {
  size_t maxlen = std::max(len_a, len_b);
  if (maxlen == 0) return 1.0;
  return 1.0 - static_cast<double>(dist) / static_cast<double>(maxlen);
}

}  // namespace

double initial_score(const GenerationRecord& rec) {
  switch (rec.task) {
    case TaskKind::BachStyle:
    case TaskKind::MotifExtraction:
    case TaskKind::FormExtraction:
      fail("task_unsupported",
           std::string("no percentile metric for task ") +
               task_name(rec.task));
    default:
      break;
  }

  auto parsed = parse_tune(rec.generated);

  switch (rec.task) {
    case TaskKind::ChordConditioned: {
      if (!rec.signals.chords)
        fail("signal_unavailable", "chord task needs a chords signal");
      if (!parsed.ok()) return 0.0;
      auto gen_chords = extract_chords(*parsed.tune);
      size_t d = edit_distance(gen_chords, *rec.signals.chords);
      return ratio_score(d, gen_chords.size(), rec.signals.chords->size());
    }
    case TaskKind::FormConditioned: {
      if (!rec.signals.form_alpha && !rec.signals.form_terms)
        fail("signal_unavailable", "form task needs form_alpha or form_terms");
      if (!parsed.ok()) return 0.0;
      return form_similarity(rec.signals, *parsed.tune);
    }
    case TaskKind::AlphaFormMotifConditioned:
    case TaskKind::TermFormMotifConditioned: {
      if (!rec.signals.form_alpha && !rec.signals.form_terms)
        fail("signal_unavailable", "form task needs form_alpha or form_terms");
      if (!rec.signals.motif)
        fail("signal_unavailable", "motif task needs a motif signal");
      if (!parsed.ok()) return 0.0;
      double form = form_similarity(rec.signals, *parsed.tune);
      double motif = motif_similarity(rec.signals, *parsed.tune);
      return (form + motif) / 2.0;
    }
    case TaskKind::MelodyHarmonization: {
      if (!rec.signals.melody)
        fail("signal_unavailable", "melody task needs a melody signal");
      auto prompt = parse_tune(*rec.signals.melody);
      if (!prompt.ok())
        fail("signal_unavailable", "melody signal is not parseable");
      if (!parsed.ok()) return 0.0;
      auto gen_tokens = body_token_texts(*parsed.tune, false);
      auto prompt_tokens = body_token_texts(*prompt.tune, false);
      size_t d = edit_distance(gen_tokens, prompt_tokens);
      return ratio_score(d, gen_tokens.size(), prompt_tokens.size());
    }
    default:
      break;
  }
  fail("task_unsupported", "unhandled task");
}

double percentile_of(double score, const std::vector<double>& pool) {
  if (pool.size() < 2)
    fail("empty_pool", "percentile needs a pool of at least two scores");
  size_t less = 0;
  for (double s : pool)
    if (s < score) ++less;
  return static_cast<double>(less) / static_cast<double>(pool.size() - 1);
}

std::map<std::string, double> average_percentiles(
    const std::map<std::string, std::vector<double>>& scores_by_system) {
  std::vector<double> pool;
  for (const auto& [system, scores] : scores_by_system)
    pool.insert(pool.end(), scores.begin(), scores.end());
  if (pool.size() < 2)
    fail("empty_pool", "percentile needs a pool of at least two scores");

  std::map<std::string, double> out;
  for (const auto& [system, scores] : scores_by_system) {
    if (scores.empty()) continue;
    double sum = 0.0;
    for (double s : scores) sum += percentile_of(s, pool);
    out[system] = sum / static_cast<double>(scores.size());
  }
  return out;
}

double repetition_rate(const std::vector<std::string>& texts) {
  if (texts.empty()) return 0.0;
  size_t with_repeat = 0;
  for (const auto& text : texts) {
    auto parsed = parse_tune(text);
    if (!parsed.ok()) continue;
    for (const auto& tok : parsed.tune->body) {
      const auto* bar = as<Barline>(tok);
      if (bar && (bar->kind == BarKind::RepeatStart ||
                  bar->kind == BarKind::RepeatEnd ||
                  bar->kind == BarKind::RepeatBoth)) {
        ++with_repeat;
        break;
      }
    }
  }
  return static_cast<double>(with_repeat) / static_cast<double>(texts.size());
}

ParseRateReport parse_success_rate(const std::vector<std::string>& texts) {
  ParseRateReport report;
  if (texts.empty()) return report;
  size_t ok = 0;
  for (size_t i = 0; i < texts.size(); ++i) {
    auto parsed = parse_tune(texts[i]);
    if (parsed.ok())
      ++ok;
    else
      report.failures.emplace_back(i, *parsed.error);
  }
  report.rate = static_cast<double>(ok) / static_cast<double>(texts.size());
  return report;
}

MemorizationReport memorization_report(
    const std::vector<std::pair<std::vector<std::string>,
                                std::vector<std::string>>>& pairs) {
  if (pairs.empty()) fail("empty_pool", "memorization needs at least one pair");
  MemorizationReport report;
  report.n = pairs.size();
  size_t exact = 0, overlap = 0;
  for (const auto& [gen, ref] : pairs) {
    if (gen == ref) ++exact;
    size_t maxlen = std::max(gen.size(), ref.size());
    double ratio = maxlen == 0
                       ? 1.0
                       : static_cast<double>(lcs_length(gen, ref)) /
                             static_cast<double>(maxlen);
    if (ratio >= 0.8) ++overlap;
  }
  report.exact_fraction =
      static_cast<double>(exact) / static_cast<double>(pairs.size());
  report.overlap80_fraction =
      static_cast<double>(overlap) / static_cast<double>(pairs.size());
  return report;
}

std::vector<std::string> memorization_tokens(const std::string& text) {
  auto parsed = parse_tune(text);
  if (parsed.ok()) return body_token_texts(*parsed.tune, true);
  std::vector<std::string> out;
  std::string word;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!word.empty()) out.push_back(std::move(word));
      word.clear();
    } else {
      word += c;
    }
  }
  if (!word.empty()) out.push_back(std::move(word));
  return out;
}

namespace {

PromptSignals parse_signals(const nlohmann::json& j, size_t line_no) {
  PromptSignals s;
  if (j.is_null()) return s;
  if (!j.is_object())
    fail("schema_error",
         "line " + std::to_string(line_no) + ": prompt_signals must be an object");
  auto str_list = [&](const char* key) -> std::optional<std::vector<std::string>> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_array())
      fail("schema_error", "line " + std::to_string(line_no) + ": " + key +
                               " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j[key]) {
      if (!e.is_string())
        fail("schema_error", "line " + std::to_string(line_no) + ": " + key +
                                 " must be an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  };
  auto str = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_string())
      fail("schema_error", "line " + std::to_string(line_no) + ": " + key +
                               " must be a string");
    return j[key].get<std::string>();
  };
  s.chords = str_list("chords");
  s.form_alpha = str("form_alpha");
  s.form_terms = str_list("form_terms");
  s.motif = str("motif");
  s.melody = str("melody");
  return s;
}

}  // namespace

std::string eval_records(std::string_view records_jsonl) {
  std::vector<GenerationRecord> records;
  size_t line_no = 0;
  for (const auto& line : split_lines(records_jsonl)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_object())
      fail("schema_error",
           "line " + std::to_string(line_no) + ": not a JSON object");
    for (const char* key : {"system", "task", "generated"})
      if (!j.contains(key) || !j[key].is_string())
        fail("schema_error", "line " + std::to_string(line_no) + ": missing string field '" +
                                 key + "'");
    GenerationRecord rec;
    rec.system = j["system"].get<std::string>();
    auto task = parse_task(j["task"].get<std::string>());
    if (!task)
      fail("schema_error", "line " + std::to_string(line_no) +
                               ": unknown task '" +
                               j["task"].get<std::string>() + "'");
    rec.task = *task;
    rec.generated = j["generated"].get<std::string>();
    if (j.contains("reference")) {
      if (!j["reference"].is_string())
        fail("schema_error",
             "line " + std::to_string(line_no) + ": reference must be a string");
      rec.reference = j["reference"].get<std::string>();
    }
    rec.signals = parse_signals(j.value("prompt_signals", nlohmann::json()),
                                line_no);
    records.push_back(std::move(rec));
  }

  // system -> task -> per-record data
  std::map<std::string, std::map<TaskKind, std::vector<size_t>>> groups;
  for (size_t i = 0; i < records.size(); ++i)
    groups[records[i].system][records[i].task].push_back(i);

  // Initial scores pooled per task across systems.
  std::map<TaskKind, std::map<std::string, std::vector<double>>> task_scores;
  for (const auto& rec : records) {
    try {
      task_scores[rec.task][rec.system].push_back(initial_score(rec));
    } catch (const MkError& e) {
      if (e.kind != "task_unsupported") throw;
    }
  }
  std::map<TaskKind, std::map<std::string, double>> task_percentiles;
  for (const auto& [task, by_system] : task_scores) {
    try {
      task_percentiles[task] = average_percentiles(by_system);
    } catch (const MkError& e) {
      if (e.kind != "empty_pool") throw;
    }
  }

  nlohmann::ordered_json systems = nlohmann::ordered_json::object();
  for (const auto& [system, by_task] : groups) {
    nlohmann::ordered_json sys = nlohmann::ordered_json::object();
    for (int t = 0; t < kNumTasks; ++t) {
      auto task = static_cast<TaskKind>(t);
      auto it = by_task.find(task);
      if (it == by_task.end()) continue;

      std::vector<std::string> texts;
      for (size_t i : it->second) texts.push_back(records[i].generated);

      nlohmann::ordered_json cell;
      cell["n"] = it->second.size();
      auto pit = task_percentiles.find(task);
      if (pit != task_percentiles.end() && pit->second.count(system))
        cell["avg_percentile"] = pit->second.at(system);
      else
        cell["avg_percentile"] = nullptr;
      cell["repetition_rate"] = repetition_rate(texts);
      cell["parse_rate"] = parse_success_rate(texts).rate;
      sys[task_name(task)] = std::move(cell);
    }
    systems[system] = std::move(sys);
  }

  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>
      pairs;
  for (const auto& rec : records)
    if (rec.reference)
      pairs.emplace_back(memorization_tokens(rec.generated),
                         memorization_tokens(*rec.reference));
  nlohmann::ordered_json memo;
  if (pairs.empty()) {
    memo["exact_fraction"] = 0.0;
    memo["overlap80_fraction"] = 0.0;
    memo["n"] = 0;
  } else {
    auto report = memorization_report(pairs);
    memo["exact_fraction"] = report.exact_fraction;
    memo["overlap80_fraction"] = report.overlap80_fraction;
    memo["n"] = report.n;
  }

  nlohmann::ordered_json out;
  out["systems"] = std::move(systems);
  out["memorization"] = std::move(memo);
  return out.dump(2) + "\n";
}

}  // namespace musekit
