#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "kgqg/context.hpp"
#include "kgqg/errors.hpp"
#include "kgqg/kb.hpp"
#include "kgqg/output_parser.hpp"

namespace kgqg {

// Third-person pronoun inventory. The first five are the forms the paper
// reports on; the possessives are tracked in a separate report column.
inline constexpr std::array<std::string_view, 5> core_pronouns = {"he", "it", "him", "she",
                                                                  "her"};
inline constexpr std::array<std::string_view, 3> possessive_pronouns = {"his", "hers", "its"};

inline bool is_possessive_pronoun(std::string_view p) {
  for (auto q : possessive_pronouns)
    if (p == q) return true;
  return false;
}

inline std::optional<Gender> pronoun_gender(std::string_view p) {
  if (p == "he" || p == "him" || p == "his") return Gender::Masculine;
  if (p == "she" || p == "her" || p == "hers") return Gender::Feminine;
  if (p == "it" || p == "its") return Gender::Neutral;
  return std::nullopt;
}

// Case-insensitive whole-word scan, left-to-right; returns lowercased
// surface forms.
inline std::vector<std::string> detect_pronouns(std::string_view question) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty() && pronoun_gender(word)) out.push_back(word);
    word.clear();
  };
  for (char c : question) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalpha(u) || u >= 0x80)
      word.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
    else
      flush();
  }
  flush();
  return out;
}

// Entities mentioned by the dialog prefix, in order: per turn the subject,
// then the object when it names a registered entity (literals are
// skipped). QuestionsOnly drops objects, for contexts where the answers
// were never shown to the model.
enum class TimelineMode { Triples, QuestionsOnly };

class MentionTimeline {
 public:
  struct Mention {
    std::string entity;  // canonical id when registered
    Gender gender = Gender::Neutral;
  };

  void add(std::string entity, Gender g) { mentions_.push_back({std::move(entity), g}); }
  bool empty() const { return mentions_.empty(); }
  const std::vector<Mention>& mentions() const { return mentions_; }

  std::optional<std::string> last_of(Gender g) const {
    for (auto it = mentions_.rbegin(); it != mentions_.rend(); ++it)
      if (it->gender == g) return it->entity;
    return std::nullopt;
  }

 private:
  std::vector<Mention> mentions_;
};

inline std::string canonical_entity(const KnowledgeBase& kb, const std::string& name) {
  const EntityMeta* m = kb.entity(name);
  return m ? m->id : normalize_ws(name);
}

inline MentionTimeline build_timeline(std::span<const Turn> prefix, const KnowledgeBase& kb,
                                      TimelineMode mode = TimelineMode::Triples) {
  MentionTimeline tl;
  for (const Turn& t : prefix) {
    tl.add(canonical_entity(kb, t.triple.subject), kb.gender_of(t.triple.subject));
    if (mode == TimelineMode::Triples && kb.is_entity(t.triple.object))
      tl.add(canonical_entity(kb, t.triple.object), kb.gender_of(t.triple.object));
  }
  return tl;
}

enum class AmbiguityReason { None, NullContext, LastMentionMismatch };

inline std::string_view to_string(AmbiguityReason r) {
  switch (r) {
    case AmbiguityReason::None: return "none";
    case AmbiguityReason::NullContext: return "null_context";
    case AmbiguityReason::LastMentionMismatch: return "last_mention_mismatch";
  }
  return "none";
}

struct PronounVerdict {
  std::string pronoun;
  Gender gender = Gender::Neutral;           // lexical gender of the pronoun
  std::string referent;                      // subject of the predicted triple
  Gender referent_gender = Gender::Neutral;
  bool gender_correct = false;
  bool ambiguous = false;
  AmbiguityReason reason = AmbiguityReason::None;
  bool possessive = false;
};

// The referent of every pronoun is taken to be the subject of the
// predicted triple; gender agreement and the two ambiguity heuristics
// (null context, last-mention-of-gender mismatch) follow from that.
inline PronounVerdict judge_pronoun(const std::string& pronoun, const ParsedOutput& parsed,
                                    const MentionTimeline& timeline, const KnowledgeBase& kb) {
  if (!parsed.wellformed_triple || !parsed.predicted_triple)
    throw NoReferent("pronoun '" + pronoun + "' has no well-formed predicted triple");
  PronounVerdict v;
  v.pronoun = pronoun;
  v.possessive = is_possessive_pronoun(pronoun);
  auto g = pronoun_gender(pronoun);
  if (!g) throw ValidationError("'" + pronoun + "' is not in the pronoun inventory");
  v.gender = *g;
  v.referent = canonical_entity(kb, parsed.predicted_triple->subject);
  v.referent_gender = kb.gender_of(v.referent);
  v.gender_correct =
      v.referent_gender == Gender::OtherGender || v.gender == v.referent_gender;
  if (timeline.empty()) {
    v.ambiguous = true;
    v.reason = AmbiguityReason::NullContext;
  } else {
    auto last = timeline.last_of(v.gender);
    if (!last || *last != v.referent) {
      v.ambiguous = true;
      v.reason = AmbiguityReason::LastMentionMismatch;
    }
  }
  return v;
}

// One pronoun-evaluation record as written to the verdict file: the
// verdict plus enough context to aggregate without re-reading inputs.
struct PronounRecord {
  std::string instance_id;
  std::string pronoun;
  bool judged = false;  // false when the predicted triple was ill-formed
  std::optional<PronounVerdict> verdict;
  std::optional<std::string> triple_key;  // predicted triple, for distinct counts
};

struct PronounCounts {
  std::size_t instances = 0;               // all evaluated instances
  std::size_t instances_with_pronoun = 0;  // ≥1 detected pronoun
  std::size_t pronouns = 0;                // judged, non-possessive
  std::map<std::string, std::size_t> by_form;
  std::size_t mistakes = 0;
  std::map<std::string, std::size_t> mistakes_by_form;
  std::size_t ambiguous = 0;
  std::map<std::string, std::size_t> ambiguous_by_form;
  std::size_t possessive_pronouns = 0;
  std::size_t possessive_mistakes = 0;
  std::size_t unjudged = 0;  // pronouns on ill-formed triples
  std::set<std::string> pronominalized_triples;
  std::set<std::string> distinct_triples;
};

struct PronounReport {
  std::map<ContextType, PronounCounts> by_context;
};

// `instance_totals` and `distinct_triples` come from the triple-verdict
// pass (every instance has a triple verdict; only pronoun-bearing ones
// have pronoun records).
inline PronounReport aggregate_pronoun_report(
    const std::vector<PronounRecord>& records,
    const std::map<ContextType, std::size_t>& instance_totals,
    const std::map<ContextType, std::set<std::string>>& distinct_triples = {}) {
  PronounReport rep;
  for (const auto& [ct, total] : instance_totals) {
    rep.by_context[ct].instances = total;
  }
  for (const auto& [ct, keys] : distinct_triples)
    rep.by_context[ct].distinct_triples = keys;
  std::map<ContextType, std::set<std::string>> with_pronoun;
  for (const PronounRecord& r : records) {
    auto parts = parse_instance_id(r.instance_id);
    if (!parts) throw ValidationError("unparseable instance id: " + r.instance_id);
    PronounCounts& c = rep.by_context[parts->context_type];
    with_pronoun[parts->context_type].insert(r.instance_id);
    if (!r.judged || !r.verdict) {
      ++c.unjudged;
      continue;
    }
    const PronounVerdict& v = *r.verdict;
    if (r.triple_key) c.pronominalized_triples.insert(*r.triple_key);
    if (v.possessive) {
      ++c.possessive_pronouns;
      if (!v.gender_correct) ++c.possessive_mistakes;
      continue;
    }
    ++c.pronouns;
    ++c.by_form[v.pronoun];
    if (!v.gender_correct) {
      ++c.mistakes;
      ++c.mistakes_by_form[v.pronoun];
    }
    if (v.ambiguous) {
      ++c.ambiguous;
      ++c.ambiguous_by_form[v.pronoun];
    }
  }
  for (auto& [ct, ids] : with_pronoun) rep.by_context[ct].instances_with_pronoun = ids.size();
  return rep;
}

}  // namespace kgqg
