#include "core/dataset.hpp"

#include <algorithm>

#include <json.hpp>

#include "core/abc.hpp"
#include "core/analysis.hpp"
#include "core/control.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"
#include "core/tokenize.hpp"

namespace musekit {

const char* task_name(TaskKind task) {
  switch (task) {
    case TaskKind::ChordConditioned:
      return "chord_conditioned";
    case TaskKind::FormConditioned:
      return "form_conditioned";
    case TaskKind::AlphaFormMotifConditioned:
      return "alpha_form_motif_conditioned";
    case TaskKind::TermFormMotifConditioned:
      return "term_form_motif_conditioned";
    case TaskKind::MelodyHarmonization:
      return "melody_harmonization";
    case TaskKind::BachStyle:
      return "bach_style";
    case TaskKind::MotifExtraction:
      return "motif_extraction";
    case TaskKind::FormExtraction:
      return "form_extraction";
  }
  return "chord_conditioned";
}

std::optional<TaskKind> parse_task(std::string_view name) {
  for (int i = 0; i < kNumTasks; ++i) {
    auto task = static_cast<TaskKind>(i);
    if (name == task_name(task)) return task;
  }
  if (name == "chord") return TaskKind::ChordConditioned;
  if (name == "form") return TaskKind::FormConditioned;
  if (name == "alpha") return TaskKind::AlphaFormMotifConditioned;
  if (name == "term") return TaskKind::TermFormMotifConditioned;
  if (name == "melody") return TaskKind::MelodyHarmonization;
  if (name == "bach") return TaskKind::BachStyle;
  return std::nullopt;
}

namespace {

constexpr const char* kPlaceholders[] = {"CHORDS", "MUSICAL_FORM_A",
                                         "MUSICAL_FORM_T", "MOTIF",
                                         "MELODY",  "MUSIC"};

bool known_placeholder(std::string_view name) {
  for (const char* p : kPlaceholders)
    if (name == p) return true;
  return false;
}

// {UPPER_CASE} spans in order of appearance.
std::vector<std::string> find_placeholders(std::string_view tmpl) {
  std::vector<std::string> out;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '{') continue;
    size_t j = i + 1;
    while (j < tmpl.size() &&
           ((tmpl[j] >= 'A' && tmpl[j] <= 'Z') || tmpl[j] == '_'))
      ++j;
    if (j > i + 1 && j < tmpl.size() && tmpl[j] == '}') {
      out.emplace_back(tmpl.substr(i + 1, j - i - 1));
      i = j;
    }
  }
  return out;
}

size_t count_of(const std::vector<std::string>& names, std::string_view want) {
  size_t n = 0;
  for (const auto& name : names)
    if (name == want) ++n;
  return n;
}

void check_template(TaskKind task, const std::string& tmpl) {
  auto names = find_placeholders(tmpl);
  for (const auto& name : names)
    if (!known_placeholder(name))
      fail("template_error", "unknown placeholder {" + name + "} in a " +
                                 std::string(task_name(task)) + " template");

  auto require = [&](std::initializer_list<const char*> wanted) {
    for (const char* p : kPlaceholders) {
      size_t want = 0;
      for (const char* w : wanted)
        if (std::string_view(p) == w) want = 1;
      size_t got = count_of(names, p);
      if (got != want)
        fail("template_error",
             std::string(task_name(task)) + " template must use {" + p +
                 "} exactly " + std::to_string(want) + " time(s), found " +
                 std::to_string(got));
    }
  };

  switch (task) {
    case TaskKind::ChordConditioned:
      require({"CHORDS"});
      break;
    case TaskKind::FormConditioned: {
      size_t a = count_of(names, "MUSICAL_FORM_A");
      size_t t = count_of(names, "MUSICAL_FORM_T");
      if (a + t != 1 || a > 1 || t > 1)
        fail("template_error",
             "form_conditioned template must use exactly one of "
             "{MUSICAL_FORM_A} or {MUSICAL_FORM_T}");
      for (const char* p : {"CHORDS", "MOTIF", "MELODY", "MUSIC"})
        if (count_of(names, p) != 0)
          fail("template_error",
               "form_conditioned template may not use {" + std::string(p) +
                   "}");
      break;
    }
    case TaskKind::AlphaFormMotifConditioned:
      require({"MUSICAL_FORM_A", "MOTIF"});
      break;
    case TaskKind::TermFormMotifConditioned:
      require({"MUSICAL_FORM_T", "MOTIF"});
      break;
    case TaskKind::MelodyHarmonization:
      require({"MELODY"});
      break;
    case TaskKind::BachStyle:
      require({});
      break;
    case TaskKind::MotifExtraction:
    case TaskKind::FormExtraction:
      require({"MUSIC"});
      break;
  }
}

std::string decode_escapes(std::string_view raw) {
  std::string out;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '\\') {
      out += raw[i];
      continue;
    }
    if (i + 1 >= raw.size())
      fail("template_error", "dangling backslash in template");
    char c = raw[++i];
    if (c == 'n')
      out += '\n';
    else if (c == 't')
      out += '\t';
    else if (c == '\\')
      out += '\\';
    else
      fail("template_error", std::string("unknown escape \\") + c +
                                 " in template");
  }
  return out;
}

std::string substitute(std::string tmpl,
                       const std::map<std::string, std::string>& fills) {
  for (const auto& name : find_placeholders(tmpl)) {
    std::string marker = "{" + name + "}";
    size_t pos = tmpl.find(marker);
    tmpl.replace(pos, marker.size(), fills.at(name));
  }
  return tmpl;
}

}  // namespace

TemplateBank default_templates() {
  TemplateBank bank;
  bank.by_task[TaskKind::ChordConditioned] = {
      "Develop a musical piece using the given chord progression.\n{CHORDS}"};
  bank.by_task[TaskKind::FormConditioned] = {
      "Craft a musical work that incorporates the given musical pattern as a "
      "central element.\n{MUSICAL_FORM_A}",
      "Craft a musical work that incorporates the given musical pattern as a "
      "central element.\n{MUSICAL_FORM_T}"};
  bank.by_task[TaskKind::AlphaFormMotifConditioned] = {
      "Develop a musical piece employing the provided motif and an "
      "alphabet-based structure.\n{MUSICAL_FORM_A}\n{MOTIF}"};
  bank.by_task[TaskKind::TermFormMotifConditioned] = {
      "Create tunes by incorporating the provided motif in the specified "
      "composition structure.\n{MUSICAL_FORM_T}\n{MOTIF}"};
  bank.by_task[TaskKind::MelodyHarmonization] = {
      "Formulate chord combinations to increase the harmonic complexity of "
      "the specified musical excerpt.\n{MELODY}"};
  bank.by_task[TaskKind::BachStyle] = {
      "Provide a musical piece that draws inspiration from Bach's "
      "compositions."};
  bank.by_task[TaskKind::MotifExtraction] = {
      "Analyze the musical work and pinpoint the consistent melodic element "
      "in every section.\n{MUSIC}"};
  bank.by_task[TaskKind::FormExtraction] = {
      "Investigate the attributes of this musical creation and identify its "
      "arrangement using suitable music-related terms.\n{MUSIC}"};
  return bank;
}

void validate_templates(const TemplateBank& bank) {
  for (int i = 0; i < kNumTasks; ++i) {
    auto task = static_cast<TaskKind>(i);
    auto it = bank.by_task.find(task);
    if (it == bank.by_task.end() || it->second.empty())
      fail("template_error", std::string("no templates for task ") +
                                 task_name(task));
    for (const auto& tmpl : it->second) check_template(task, tmpl);
  }
}

TemplateBank load_templates(const std::string& path, TemplateBank base) {
  std::string text = read_file(path);
  std::map<TaskKind, std::vector<std::string>> loaded;
  size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      fail("template_error", "line " + std::to_string(line_no) +
                                 ": expected task_name<TAB>template");
    auto task = parse_task(trim(line.substr(0, tab)));
    if (!task)
      fail("template_error", "line " + std::to_string(line_no) +
                                 ": unknown task '" +
                                 std::string(trim(line.substr(0, tab))) + "'");
    loaded[*task].push_back(decode_escapes(line.substr(tab + 1)));
  }
  for (auto& [task, templates] : loaded)
    base.by_task[task] = std::move(templates);
  validate_templates(base);
  return base;
}

namespace {

struct TaskBuild {
  std::map<std::string, std::string> fills;
  std::string answer;
};

std::string join_tokens(const std::vector<BodyToken>& tokens) {
  std::vector<std::string> parts;
  for (const auto& tok : tokens) parts.push_back(token_text(tok));
  return join(parts, " ");
}

std::string terms_text(const AlphabeticForm& form) {
  std::vector<std::string> names;
  for (auto term : terminology_forms(form)) names.push_back(form_term_name(term));
  return join(names, ", ");
}

// Builds the placeholder fills and the assistant answer, or reports the
// skip reason for records where the task's inputs are absent.
std::optional<std::string> build_task(TaskKind task, const Tune& tune,
                                      const std::string& abc,
                                      const std::string& style,
                                      TaskBuild& out) {
  try {
    switch (task) {
      case TaskKind::ChordConditioned: {
        auto chords = extract_chords(tune);
        if (chords.empty()) return "no_chords";
        out.fills["CHORDS"] = join(chords, " ");
        out.answer = abc;
        return std::nullopt;
      }
      case TaskKind::FormConditioned: {
        auto form = alphabetic_form(compute_control_code(tune));
        out.fills["MUSICAL_FORM_A"] = form.text();
        out.fills["MUSICAL_FORM_T"] = terms_text(form);
        out.answer = abc;
        return std::nullopt;
      }
      case TaskKind::AlphaFormMotifConditioned:
      case TaskKind::TermFormMotifConditioned: {
        auto form = alphabetic_form(compute_control_code(tune));
        auto motif = extract_motif(split_sections(tune).front());
        if (task == TaskKind::AlphaFormMotifConditioned)
          out.fills["MUSICAL_FORM_A"] = form.text();
        else
          out.fills["MUSICAL_FORM_T"] = terms_text(form);
        out.fills["MOTIF"] = join_tokens(motif);
        out.answer = abc;
        return std::nullopt;
      }
      case TaskKind::MelodyHarmonization: {
        if (extract_chords(tune).empty()) return "no_chords";
        out.fills["MELODY"] = serialize(strip_chords(tune));
        out.answer = abc;
        return std::nullopt;
      }
      case TaskKind::BachStyle: {
        if (style != "bach") return "not_bach_style";
        out.answer = abc;
        return std::nullopt;
      }
      case TaskKind::MotifExtraction: {
        std::vector<std::string> lines;
        for (const auto& motif : extract_motifs_per_section(tune))
          lines.push_back(join_tokens(motif));
        out.fills["MUSIC"] = abc;
        out.answer = join(lines, "\n");
        return std::nullopt;
      }
      case TaskKind::FormExtraction: {
        auto form = alphabetic_form(compute_control_code(tune));
        out.fills["MUSIC"] = abc;
        out.answer = terms_text(form);
        return std::nullopt;
      }
    }
  } catch (const MkError& e) {
    if (e.kind == "empty_section") return "empty_section";
    if (e.kind == "empty_after_filter") return "empty_motif";
    if (e.kind == "value_out_of_range") return "bad_control_code";
    throw;
  }
  return "invalid_record";
}

}  // namespace

DatasetResult generate_dataset(std::string_view input_jsonl,
                               const DatasetOptions& options) {
  validate_templates(options.templates);

  std::vector<TaskKind> tasks = options.tasks;
  if (tasks.empty())
    for (int i = 0; i < kNumTasks; ++i) tasks.push_back(static_cast<TaskKind>(i));
  std::sort(tasks.begin(), tasks.end());
  tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());

  DatasetResult result;
  auto skip = [&](TaskKind task, const char* reason) {
    result.skipped[std::string(task_name(task)) + "/" + reason]++;
  };

  for (const auto& line : split_lines(input_jsonl)) {
    if (trim(line).empty()) continue;
    result.records++;

    auto j = nlohmann::json::parse(line, nullptr, false);
    bool valid = j.is_object() && j.contains("id") && j["id"].is_string() &&
                 j.contains("abc") && j["abc"].is_string() &&
                 (!j.contains("style") || j["style"].is_string());
    if (!valid) {
      for (auto task : tasks) skip(task, "invalid_record");
      continue;
    }
    std::string id = j["id"].get<std::string>();
    std::string abc = j["abc"].get<std::string>();
    std::string style = j.value("style", "");

    auto parsed = parse_tune(abc);
    for (auto task : tasks) {
      if (!parsed.ok()) {
        skip(task, "invalid_abc");
        continue;
      }
      TaskBuild build;
      if (auto reason = build_task(task, *parsed.tune, abc, style, build)) {
        skip(task, reason->c_str());
        continue;
      }

      const auto& templates = options.templates.by_task.at(task);
      Rng rng(mix_seed({options.seed, fnv1a64(id),
                        static_cast<uint64_t>(task)}));
      size_t idx = static_cast<size_t>(rng.bounded(templates.size()));
      std::string prompt = substitute(templates[idx], build.fills);

      nlohmann::ordered_json rec;
      rec["task"] = task_name(task);
      rec["source_id"] = id;
      rec["template_id"] =
          std::string(task_name(task)) + "/" + std::to_string(idx);
      rec["messages"] = nlohmann::ordered_json::array(
          {{{"role", "user"}, {"content", prompt}},
           {{"role", "assistant"}, {"content", build.answer}}});
      result.jsonl += rec.dump();
      result.jsonl += "\n";
      result.written++;
    }
  }
  return result;
}

}  // namespace musekit
