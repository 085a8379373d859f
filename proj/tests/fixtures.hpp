#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace fixtures {

// Nine-line waltz used as the primary parser fixture. The :: barline splits
// it into two sections.
inline constexpr const char* kWaltz =
R"abc(X:1
L:1/8
M:3/4
K:D
de |"D" f3 g a{/g}f |"A" e4 AB |"C" =c3 d"G/B" B{/A}G |"A" A4 fg |
"D" a3 g fd |"A" e4 AB |"C" =c3 d e{/f}g |"D" f4 ::
d{/edc}A |"Bm" B2 A2 F2 |"F#m" A3 B d{/edc}A |"G" B2 A2 F2 |
"A" (E4 E)A |"Bm" B3 A FD |"F#m" C3 D (F/G/A) |
"G" B3 e"A" dc |"D" d4 :|
)abc";

// Two-section score with voltas, repeats, slurs and 25 chord symbols.
inline constexpr const char* kFig6 =
R"abc(X:1
L:1/8
M:2/4
K:F
F/G/ |:"F" BA"C7" GG |"F" FA"C7" G2 |"F" F>G"C7" AB |
"Am" cA"C7" GF/G/ |"F" BA"C7" GG |"F" FA"C7" G2 |"F" F>G"Bb" Bd |
1"C7" cE"F" FF/G/ :|2"C7" cE"F" F z |:"F" f3 (c/d/)(d/e/) |
"Gm" (e/f/)(f/g/) g>ec |"C7" e/d/ d/c/c/B/ B/A/A/G/ |"F" GA/B/ c/d/e/f/ | f3 (c/d/)(d/e/) |
"Gm" (e/f/)(f/g/) g>ec |"C7" e/d/ d/c/c/B/ B/A/A/G/ |"F" FA/c/ f z :|
)abc";

// Golden 5-shot prompt layout. "[Actual question here]" marks where the
// scored item's block goes.
inline constexpr const char* kFivePromptGolden =
R"gold(Read the following questions from the four options (A, B, C and D) given in each question. Choose the best option.
Which of the following chord progressions best describes the above example?
L:1/4
M:4/4
K:E
 [G,B,E] [A,CE] [F,B,D] [F,A,C] |] %1
A. ii6/4 – V – vi6 - iii
B. I6 – IV – V6/4 - ii
C. IV – V6/4 – I - ii
D. iii6 – V – I6/4 - IV
Answer: B

Which of the following best describes the seventh chord in the above example?
L:1/4
M:4/4
K:D
 [FGBd]4 |] %1
A. Major seventh in third inversion
B. Dominant seventh in second inversion
C. Major/minor seventh in third inversion
D. Minor seventh in second inversion
Answer: A

Which of the following is the name of the note in the above example?
L:1/4
M:4/4
K:Cb
 D,4 |] %1
A. B-flat
B. D
C. B
D. D-flat
Answer: D

The chord in the above example can be best described as which of the following?
L:1/4
M:4/4
K:F#
 [EGB]4 |] %1
A. viio
B. V
C. ii
D. iv
Answer: A

[Actual question here])gold";

struct ExemplarData {
  const char* id;
  const char* stem;
  const char* opts[4];
  int answer;
};

// Five held-out exemplars; the first four appear in the golden prompt above.
inline constexpr ExemplarData kExemplars[5] = {
    {"ex1",
     "Which of the following chord progressions best describes the above "
     "example?\nL:1/4\nM:4/4\nK:E\n [G,B,E] [A,CE] [F,B,D] [F,A,C] |] %1",
     {"ii6/4 – V – vi6 - iii", "I6 – IV – V6/4 - ii", "IV – V6/4 – I - ii",
      "iii6 – V – I6/4 - IV"},
     1},
    {"ex2",
     "Which of the following best describes the seventh chord in the above "
     "example?\nL:1/4\nM:4/4\nK:D\n [FGBd]4 |] %1",
     {"Major seventh in third inversion",
      "Dominant seventh in second inversion",
      "Major/minor seventh in third inversion",
      "Minor seventh in second inversion"},
     0},
    {"ex3",
     "Which of the following is the name of the note in the above "
     "example?\nL:1/4\nM:4/4\nK:Cb\n D,4 |] %1",
     {"B-flat", "D", "B", "D-flat"},
     3},
    {"ex4",
     "The chord in the above example can be best described as which of the "
     "following?\nL:1/4\nM:4/4\nK:F#\n [EGB]4 |] %1",
     {"viio", "V", "ii", "iv"},
     0},
    {"ex5",
     "Which of the following best describes the interval in the above "
     "example?\nL:1/4\nM:4/4\nK:C\n [CF]4 |] %1",
     {"Perfect fourth", "Diminished fifth", "Minor third",
      "Augmented second"},
     0},
};

// Instruction sentence prefixes of the built-in templates.
inline constexpr const char* kChordSentence =
    "Develop a musical piece using the given chord progression.";
inline constexpr const char* kFormSentence =
    "Craft a musical work that incorporates the given musical pattern as a "
    "central element.";
inline constexpr const char* kAlphaSentence =
    "Develop a musical piece employing the provided motif and an "
    "alphabet-based structure.";
inline constexpr const char* kTermSentence =
    "Create tunes by incorporating the provided motif in the specified "
    "composition structure.";
inline constexpr const char* kMelodySentence =
    "Formulate chord combinations to increase the harmonic complexity of the "
    "specified musical excerpt.";
inline constexpr const char* kBachSentence =
    "Provide a musical piece that draws inspiration from Bach's "
    "compositions.";
inline constexpr const char* kMotifXSentence =
    "Analyze the musical work and pinpoint the consistent melodic element in "
    "every section.";
inline constexpr const char* kFormXSentence =
    "Investigate the attributes of this musical creation and identify its "
    "arrangement using suitable music-related terms.";

inline std::string temp_path(const std::string& name) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "musekit_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

inline std::string write_temp(const std::string& name,
                              const std::string& content) {
  std::string p = temp_path(name);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  return p;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// Strips trailing spaces and tabs from every line and trailing newlines from
// the end; used for byte comparisons that ignore trailing whitespace.
inline std::string rstrip_lines(std::string_view s) {
  std::string out;
  std::string line;
  auto flush = [&](bool newline) {
    size_t end = line.size();
    while (end > 0 && (line[end - 1] == ' ' || line[end - 1] == '\t')) --end;
    out.append(line, 0, end);
    if (newline) out.push_back('\n');
    line.clear();
  };
  for (char c : s) {
    if (c == '\n') {
      flush(true);
    } else {
      line.push_back(c);
    }
  }
  if (!line.empty()) flush(false);
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

}  // namespace fixtures
