#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgqg/context.hpp"
#include "kgqg/jsonl.hpp"
#include "kgqg/pronoun_eval.hpp"
#include "kgqg/question_eval.hpp"
#include "kgqg/triple_eval.hpp"

namespace kgqg {

// ---- evaluation instances ----

inline json instance_to_record(const EvalInstance& inst) {
  json graph = json::array();
  for (const auto& [t, tag] : inst.graph.order)
    graph.push_back({{"s", t.subject},
                     {"p", t.property},
                     {"o", t.object},
                     {"tag", std::string(to_string(tag))}});
  return {{"id", inst.id()},
          {"root_entity", inst.root_entity},
          {"category", inst.category},
          {"graph", graph},
          {"prefix_len", inst.prefix.size()},
          {"context_type", std::string(to_string(inst.context_type))},
          {"target",
           {{"s", inst.target.triple.subject},
            {"p", inst.target.triple.property},
            {"o", inst.target.triple.object},
            {"q", inst.target.question},
            {"a", inst.target.answer}}}};
}

// Rebuild an instance from its record plus the source dialogs (for the
// prefix turns). The graph array preserves the serialization order; base
// triples are the relevant-tagged entries.
inline EvalInstance instance_from_record(const json& rec,
                                         const std::map<std::string, Dialog>& dialogs,
                                         const std::string& file, std::size_t line) {
  EvalInstance inst;
  const std::string id = require_string(rec, "id", file, line);
  auto parts = parse_instance_id(id);
  if (!parts) throw MalformedRecord(file, line, "bad instance id '" + id + "'");
  inst.dialog_id = parts->dialog_id;
  inst.context_type = parts->context_type;
  inst.graph.n = parts->n;
  inst.root_entity = normalize_ws(require_string(rec, "root_entity", file, line));
  inst.category = normalize_ws(require_string(rec, "category", file, line));
  auto git = rec.find("graph");
  if (git == rec.end() || !git->is_array())
    throw MalformedRecord(file, line, "missing 'graph' array");
  for (const auto& g : *git) {
    Triple t = triple_from_record(g, file, line);
    auto tag = parse_distractor_tag(require_string(g, "tag", file, line));
    if (!tag) throw MalformedRecord(file, line, "bad distractor tag");
    inst.graph.order.emplace_back(t, *tag);
    if (*tag == DistractorTag::Relevant)
      inst.graph.base.push_back(t);
    else
      inst.graph.distractors.emplace_back(t, *tag);
  }
  auto tit = rec.find("target");
  if (tit == rec.end() || !tit->is_object())
    throw MalformedRecord(file, line, "missing 'target' object");
  inst.target = detail::turn_from_record(*tit, file, line);
  auto dit = dialogs.find(inst.dialog_id);
  if (dit == dialogs.end())
    throw ValidationError("instance '" + id + "' references unknown dialog '" +
                          inst.dialog_id + "'");
  const Dialog& d = dit->second;
  if (parts->prefix_len >= d.turns.size())
    throw ValidationError("instance '" + id + "' prefix length " +
                          std::to_string(parts->prefix_len) + " exceeds dialog with " +
                          std::to_string(d.turns.size()) + " turns");
  inst.prefix.assign(d.turns.begin(), d.turns.begin() + static_cast<long>(parts->prefix_len));
  return inst;
}

inline std::vector<EvalInstance> load_instances(const std::filesystem::path& path,
                                                const std::map<std::string, Dialog>& dialogs) {
  std::vector<EvalInstance> out;
  const std::string file = path.string();
  for_each_jsonl(path, [&](const json& rec, std::size_t line) {
    out.push_back(instance_from_record(rec, dialogs, file, line));
  });
  return out;
}

// ---- triple verdicts ----

inline json verdict_to_record(const TripleVerdict& v) {
  json labels = json::array();
  for (TripleLabel l : v.all_labels) labels.push_back(std::string(to_string(l)));
  json triple = nullptr;
  if (v.triple)
    triple = {{"s", v.triple->subject}, {"p", v.triple->property}, {"o", v.triple->object}};
  return {{"id", v.instance_id},
          {"primary", std::string(to_string(v.primary))},
          {"labels", labels},
          {"relevant", v.relevant},
          {"vocab",
           {{"subject", v.vocab.subject},
            {"property", v.vocab.property},
            {"object", v.vocab.object}}},
          {"triple", triple},
          {"oos_pred", {{"entity", v.oos_entity_predicate}, {"property", v.oos_property_predicate}}}};
}

inline TripleVerdict verdict_from_record(const json& rec, const std::string& file,
                                         std::size_t line) {
  TripleVerdict v;
  v.instance_id = require_string(rec, "id", file, line);
  auto primary = parse_triple_label(require_string(rec, "primary", file, line));
  if (!primary) throw MalformedRecord(file, line, "bad primary label");
  v.primary = *primary;
  auto lit = rec.find("labels");
  if (lit == rec.end() || !lit->is_array())
    throw MalformedRecord(file, line, "missing 'labels' array");
  for (const auto& l : *lit) {
    auto lab = parse_triple_label(l.get<std::string>());
    if (!lab) throw MalformedRecord(file, line, "bad label in 'labels'");
    v.all_labels.insert(*lab);
  }
  v.relevant = rec.value("relevant", false);
  if (auto vit = rec.find("vocab"); vit != rec.end() && vit->is_object()) {
    v.vocab.subject = vit->value("subject", false);
    v.vocab.property = vit->value("property", false);
    v.vocab.object = vit->value("object", false);
  }
  if (auto tit = rec.find("triple"); tit != rec.end() && tit->is_object())
    v.triple = triple_from_record(*tit, file, line);
  if (auto oit = rec.find("oos_pred"); oit != rec.end() && oit->is_object()) {
    v.oos_entity_predicate = oit->value("entity", false);
    v.oos_property_predicate = oit->value("property", false);
  }
  return v;
}

inline std::vector<TripleVerdict> load_verdicts(const std::filesystem::path& path) {
  std::vector<TripleVerdict> out;
  const std::string file = path.string();
  for_each_jsonl(path, [&](const json& rec, std::size_t line) {
    out.push_back(verdict_from_record(rec, file, line));
  });
  return out;
}

// ---- question scores ----

struct QuestionScoreRecord {
  std::string instance_id;
  std::optional<double> tq_gleu;
  std::optional<double> quality_gleu;
  std::optional<std::string> skip_reason;
};

inline json score_to_record(const QuestionScoreRecord& r) {
  return {{"id", r.instance_id},
          {"tq_gleu", r.tq_gleu ? json(*r.tq_gleu) : json(nullptr)},
          {"quality_gleu", r.quality_gleu ? json(*r.quality_gleu) : json(nullptr)},
          {"skip_reason", r.skip_reason ? json(*r.skip_reason) : json(nullptr)}};
}

inline QuestionScoreRecord score_from_record(const json& rec, const std::string& file,
                                             std::size_t line) {
  QuestionScoreRecord r;
  r.instance_id = require_string(rec, "id", file, line);
  if (auto it = rec.find("tq_gleu"); it != rec.end() && it->is_number())
    r.tq_gleu = it->get<double>();
  if (auto it = rec.find("quality_gleu"); it != rec.end() && it->is_number())
    r.quality_gleu = it->get<double>();
  if (auto it = rec.find("skip_reason"); it != rec.end() && it->is_string())
    r.skip_reason = it->get<std::string>();
  return r;
}

inline std::vector<QuestionScoreRecord> load_scores(const std::filesystem::path& path) {
  std::vector<QuestionScoreRecord> out;
  const std::string file = path.string();
  for_each_jsonl(path, [&](const json& rec, std::size_t line) {
    out.push_back(score_from_record(rec, file, line));
  });
  return out;
}

// ---- pronoun records ----

inline json pronoun_to_record(const PronounRecord& r) {
  json rec = {{"id", r.instance_id}, {"pronoun", r.pronoun}, {"judged", r.judged}};
  if (r.verdict) {
    const PronounVerdict& v = *r.verdict;
    rec["pronoun_gender"] = std::string(to_string(v.gender));
    rec["referent"] = v.referent;
    rec["referent_gender"] = std::string(to_string(v.referent_gender));
    rec["gender_correct"] = v.gender_correct;
    rec["ambiguous"] = v.ambiguous;
    rec["reason"] = std::string(to_string(v.reason));
    rec["possessive"] = v.possessive;
  }
  rec["triple_key"] = r.triple_key ? json(*r.triple_key) : json(nullptr);
  return rec;
}

inline std::optional<Gender> parse_gender_name(std::string_view s) {
  if (s == "masculine") return Gender::Masculine;
  if (s == "feminine") return Gender::Feminine;
  if (s == "other") return Gender::OtherGender;
  if (s == "neutral") return Gender::Neutral;
  return std::nullopt;
}

inline PronounRecord pronoun_from_record(const json& rec, const std::string& file,
                                         std::size_t line) {
  PronounRecord r;
  r.instance_id = require_string(rec, "id", file, line);
  r.pronoun = require_string(rec, "pronoun", file, line);
  r.judged = rec.value("judged", false);
  if (r.judged) {
    PronounVerdict v;
    v.pronoun = r.pronoun;
    auto pg = parse_gender_name(require_string(rec, "pronoun_gender", file, line));
    auto rg = parse_gender_name(require_string(rec, "referent_gender", file, line));
    if (!pg || !rg) throw MalformedRecord(file, line, "bad gender name");
    v.gender = *pg;
    v.referent_gender = *rg;
    v.referent = require_string(rec, "referent", file, line);
    v.gender_correct = rec.value("gender_correct", false);
    v.ambiguous = rec.value("ambiguous", false);
    v.possessive = rec.value("possessive", false);
    const std::string reason = require_string(rec, "reason", file, line);
    v.reason = reason == "null_context" ? AmbiguityReason::NullContext
               : reason == "last_mention_mismatch" ? AmbiguityReason::LastMentionMismatch
                                                   : AmbiguityReason::None;
    r.verdict = std::move(v);
  }
  if (auto it = rec.find("triple_key"); it != rec.end() && it->is_string())
    r.triple_key = it->get<std::string>();
  return r;
}

inline std::vector<PronounRecord> load_pronoun_records(const std::filesystem::path& path) {
  std::vector<PronounRecord> out;
  const std::string file = path.string();
  for_each_jsonl(path, [&](const json& rec, std::size_t line) {
    out.push_back(pronoun_from_record(rec, file, line));
  });
  return out;
}

}  // namespace kgqg
