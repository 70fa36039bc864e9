#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "kgqg/jsonl.hpp"
#include "kgqg/triple.hpp"

namespace kgqg {

// One question-answer pair and the fact grounding it.
struct Turn {
  Triple triple;
  std::string question;
  std::string answer;
};

struct Dialog {
  std::string id;
  std::string root_entity;  // subject of the first turn's triple
  std::string category;     // Wikidata category of the root entity
  std::vector<Turn> turns;

  // K_D: the grounding triples, deduplicated, in first-occurrence order.
  std::vector<Triple> base_graph() const {
    std::vector<Triple> out;
    for (const Turn& t : turns) {
      bool seen = false;
      for (const Triple& u : out)
        if (u == t.triple) { seen = true; break; }
      if (!seen) out.push_back(t.triple);
    }
    return out;
  }
};

struct PredictionRecord {
  std::string instance_id;
  std::string raw_output;
};

struct AnnotationRecord {
  std::string item_id;
  std::string annotator_id;
  std::string fluency;     // yes | no
  std::string repetition;  // yes | no
  std::string coherence;   // high | medium | low
};

struct DialogBounds {
  std::size_t min_turns = 5;
  std::size_t max_turns = 19;
  bool enforce = false;  // warn-only by default, so toy fixtures load
};

namespace detail {

inline Turn turn_from_record(const json& rec, const std::string& file, std::size_t line) {
  Turn t;
  t.triple = triple_from_record(rec, file, line);
  t.question = trim(require_string(rec, "q", file, line));
  t.answer = trim(rec.contains("a") ? require_string(rec, "a", file, line) : "");
  return t;
}

inline Dialog dialog_from_record(const json& rec, const std::string& file, std::size_t line) {
  Dialog d;
  d.id = require_string(rec, "id", file, line);
  d.root_entity = normalize_ws(require_string(rec, "root_entity", file, line));
  d.category = normalize_ws(require_string(rec, "category", file, line));
  auto it = rec.find("turns");
  if (it == rec.end() || !it->is_array())
    throw MalformedRecord(file, line, "missing 'turns' array");
  for (const auto& tr : *it) d.turns.push_back(turn_from_record(tr, file, line));
  if (d.turns.empty()) throw MalformedDialog(d.id, "dialog has no turns");
  for (std::size_t i = 0; i < d.turns.size(); ++i)
    if (d.turns[i].question.empty())
      throw MalformedDialog(d.id, "turn " + std::to_string(i) + " has an empty question");
  if (d.turns.front().triple.subject != d.root_entity)
    throw MalformedDialog(d.id, "root entity '" + d.root_entity +
                                    "' does not match first turn subject '" +
                                    d.turns.front().triple.subject + "'");
  return d;
}

}  // namespace detail

// Streaming loader; `fn` sees each dialog once, in file order.
// Returns the number of dialogs violating the length bounds (throws
// instead when bounds.enforce is set).
inline std::size_t for_each_dialog(const std::filesystem::path& path,
                                   const std::function<void(const Dialog&)>& fn,
                                   const DialogBounds& bounds = {}) {
  std::size_t violations = 0;
  const std::string file = path.string();
  for_each_jsonl(path, [&](const json& rec, std::size_t line) {
    Dialog d = detail::dialog_from_record(rec, file, line);
    if (d.turns.size() < bounds.min_turns || d.turns.size() > bounds.max_turns) {
      if (bounds.enforce)
        throw LengthViolation("dialog '" + d.id + "' has " + std::to_string(d.turns.size()) +
                              " turns, outside [" + std::to_string(bounds.min_turns) + ", " +
                              std::to_string(bounds.max_turns) + "]");
      ++violations;
    }
    fn(d);
  });
  return violations;
}

inline std::vector<Dialog> load_dialogs(const std::filesystem::path& path,
                                        const DialogBounds& bounds = {},
                                        std::size_t* length_warnings = nullptr) {
  std::vector<Dialog> out;
  std::size_t v = for_each_dialog(path, [&](const Dialog& d) { out.push_back(d); }, bounds);
  if (length_warnings) *length_warnings = v;
  return out;
}

inline std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  std::vector<PredictionRecord> out;
  const std::string file = path.string();
  for_each_jsonl(path, [&](const json& rec, std::size_t line) {
    out.push_back({require_string(rec, "id", file, line),
                   require_string(rec, "output", file, line)});
  });
  return out;
}

inline std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
  std::vector<AnnotationRecord> out;
  const std::string file = path.string();
  auto one_of = [&](const json& rec, const char* field, std::initializer_list<const char*> allowed,
                    std::size_t line) {
    std::string v = require_string(rec, field, file, line);
    for (const char* a : allowed)
      if (v == a) return v;
    throw MalformedRecord(file, line, std::string("bad value '") + v + "' for '" + field + "'");
  };
  for_each_jsonl(path, [&](const json& rec, std::size_t line) {
    AnnotationRecord a;
    a.item_id = require_string(rec, "item", file, line);
    a.annotator_id = require_string(rec, "annotator", file, line);
    a.fluency = one_of(rec, "fluency", {"yes", "no"}, line);
    a.repetition = one_of(rec, "repetition", {"yes", "no"}, line);
    a.coherence = one_of(rec, "coherence", {"high", "medium", "low"}, line);
    out.push_back(std::move(a));
  });
  return out;
}

inline json dialog_to_record(const Dialog& d) {
  json turns = json::array();
  for (const Turn& t : d.turns)
    turns.push_back({{"s", t.triple.subject},
                     {"p", t.triple.property},
                     {"o", t.triple.object},
                     {"q", t.question},
                     {"a", t.answer}});
  return {{"id", d.id},
          {"root_entity", d.root_entity},
          {"category", d.category},
          {"turns", turns}};
}

inline void write_dialogs(const std::vector<Dialog>& dialogs,
                          const std::filesystem::path& path) {
  JsonlWriter w(path);
  for (const Dialog& d : dialogs) w.write(dialog_to_record(d));
  w.close();
}

inline void write_predictions(const std::vector<PredictionRecord>& preds,
                              const std::filesystem::path& path) {
  JsonlWriter w(path);
  for (const auto& p : preds) w.write({{"id", p.instance_id}, {"output", p.raw_output}});
  w.close();
}

inline void write_annotations(const std::vector<AnnotationRecord>& anns,
                              const std::filesystem::path& path) {
  JsonlWriter w(path);
  for (const auto& a : anns)
    w.write({{"item", a.item_id},
             {"annotator", a.annotator_id},
             {"fluency", a.fluency},
             {"repetition", a.repetition},
             {"coherence", a.coherence}});
  w.close();
}

}  // namespace kgqg
