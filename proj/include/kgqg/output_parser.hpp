#pragma once

#include <optional>
#include <string>

#include "kgqg/context.hpp"
#include "kgqg/errors.hpp"
#include "kgqg/text.hpp"
#include "kgqg/triple.hpp"

namespace kgqg {

enum class OutputMode { Extended, QuestionOnly };

inline std::string_view to_string(OutputMode m) {
  return m == OutputMode::Extended ? "extended" : "question-only";
}

inline std::optional<OutputMode> parse_output_mode(std::string_view s) {
  if (s == "extended") return OutputMode::Extended;
  if (s == "question-only" || s == "question_only") return OutputMode::QuestionOnly;
  return std::nullopt;
}

// A model output split into its fact and question channels. In Extended
// mode, wellformed_triple means the raw string matched the full grammar
// "[TRIPLE] <t> <sj> S <p> P <o> O </t> [QUESTION] q"; the question and
// the triple slots are still extracted best-effort when it did not.
struct ParsedOutput {
  std::optional<Triple> predicted_triple;
  std::string question;
  bool wellformed_triple = false;
  OutputMode mode = OutputMode::Extended;
  bool question_salvaged = false;  // [QUESTION] marker was missing
};

namespace detail {

// Relaxed slot extraction: find <sj>, <p>, <o> in order and take the text
// up to the next marker. Recovers a triple from outputs that break the
// frame (missing <t>, missing [QUESTION], trailing junk) so vocabulary
// statistics stay available for ill-formed outputs.
inline std::optional<Triple> extract_triple_slots(const std::vector<std::string>& toks) {
  std::string slots[3];
  int slot = -1;
  for (const std::string& tok : toks) {
    if (tok == "<sj>" && slot < 0) {
      slot = 0;
    } else if (tok == "<p>" && slot == 0) {
      slot = 1;
    } else if (tok == "<o>" && slot == 1) {
      slot = 2;
    } else if (is_marker(tok)) {
      if (slot == 2) break;  // frame closed after the object
      continue;
    } else if (slot >= 0) {
      if (!slots[slot].empty()) slots[slot] += ' ';
      slots[slot] += tok;
    }
  }
  if (slot != 2) return std::nullopt;
  return Triple::try_make(slots[0], slots[1], slots[2]);
}

inline bool matches_extended_grammar(const std::vector<std::string>& toks) {
  // [TRIPLE] <t> <sj> S+ <p> P+ <o> O+ </t> [QUESTION] q*
  std::size_t i = 0;
  auto expect = [&](std::string_view m) {
    if (i < toks.size() && toks[i] == m) {
      ++i;
      return true;
    }
    return false;
  };
  auto slot_text = [&]() {
    std::size_t words = 0;
    while (i < toks.size() && !is_marker(toks[i])) {
      ++i;
      ++words;
    }
    return words > 0;
  };
  if (!expect("[TRIPLE]")) return false;
  if (!expect("<t>")) return false;
  if (!expect("<sj>") || !slot_text()) return false;
  if (!expect("<p>") || !slot_text()) return false;
  if (!expect("<o>") || !slot_text()) return false;
  if (!expect("</t>")) return false;
  if (!expect("[QUESTION]")) return false;
  for (; i < toks.size(); ++i)
    if (is_marker(toks[i])) return false;  // markers may not reappear in the question
  return true;
}

}  // namespace detail

// Split a raw model output into (predicted triple, question).
// QuestionOnly mode passes the whole string through as the question.
inline ParsedOutput parse_output(const std::string& raw, OutputMode mode) {
  ParsedOutput p;
  p.mode = mode;
  const std::string trimmed = trim(raw);
  if (trimmed.empty()) throw EmptyOutput("blank model output");
  if (mode == OutputMode::QuestionOnly) {
    p.question = trimmed;
    return p;
  }
  std::vector<std::string> toks = marker_tokens(trimmed);
  p.wellformed_triple = detail::matches_extended_grammar(toks);
  p.predicted_triple = detail::extract_triple_slots(toks);

  const std::size_t qmark = trimmed.find("[QUESTION]");
  if (qmark != std::string::npos) {
    p.question = trim(trimmed.substr(qmark + std::string_view("[QUESTION]").size()));
  } else {
    // Salvage: text after the last </t>, or the whole tail after [TRIPLE].
    p.question_salvaged = true;
    const std::size_t close = trimmed.rfind("</t>");
    if (close != std::string::npos) {
      p.question = trim(trimmed.substr(close + 4));
    } else {
      const std::size_t tmark = trimmed.find("[TRIPLE]");
      p.question = trim(tmark == std::string::npos
                            ? trimmed
                            : trimmed.substr(tmark + std::string_view("[TRIPLE]").size()));
    }
  }
  return p;
}

}  // namespace kgqg
