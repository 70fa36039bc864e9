#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgqg/context.hpp"
#include "kgqg/kb.hpp"
#include "kgqg/output_parser.hpp"

namespace kgqg {

// Classification of a predicted triple. The first six labels follow the
// taxonomy of the triple-evaluation table; off_graph is the fallback for
// well-formed KB triples that are neither in the input graph nor
// distractors (the taxonomy's conditions are not exhaustive).
enum class TripleLabel {
  ExactMatch,
  OtherFromInputGraph,
  Repetition,
  OOSEntityGenerated,
  OOSPropertyGenerated,
  NoiseGenerated,
  NotInKB,
  IllFormed,
  OffGraph,
};

inline constexpr std::array<TripleLabel, 9> all_triple_labels = {
    TripleLabel::ExactMatch,       TripleLabel::OtherFromInputGraph,
    TripleLabel::Repetition,       TripleLabel::OOSEntityGenerated,
    TripleLabel::OOSPropertyGenerated, TripleLabel::NoiseGenerated,
    TripleLabel::NotInKB,          TripleLabel::IllFormed,
    TripleLabel::OffGraph,
};

inline std::string_view to_string(TripleLabel l) {
  switch (l) {
    case TripleLabel::ExactMatch: return "exact_match";
    case TripleLabel::OtherFromInputGraph: return "other_from_input_graph";
    case TripleLabel::Repetition: return "repetition";
    case TripleLabel::OOSEntityGenerated: return "oos_entity";
    case TripleLabel::OOSPropertyGenerated: return "oos_property";
    case TripleLabel::NoiseGenerated: return "noise";
    case TripleLabel::NotInKB: return "not_in_kb";
    case TripleLabel::IllFormed: return "ill_formed";
    case TripleLabel::OffGraph: return "off_graph";
  }
  return "ill_formed";
}

inline std::optional<TripleLabel> parse_triple_label(std::string_view s) {
  for (TripleLabel l : all_triple_labels)
    if (to_string(l) == s) return l;
  return std::nullopt;
}

struct TripleVerdict {
  std::string instance_id;
  TripleLabel primary = TripleLabel::IllFormed;
  std::set<TripleLabel> all_labels;
  bool relevant = false;
  VocabFlags vocab;
  std::optional<Triple> triple;
  // Secondary out-of-scope predicate matches (not tag-based): the triple
  // is outside K_D but shares the root entity's category resp. one of
  // K_D's properties.
  bool oos_entity_predicate = false;
  bool oos_property_predicate = false;
};

// Priority order resolving the taxonomy's overlaps into one primary label.
inline constexpr std::array<TripleLabel, 8> primary_label_order = {
    TripleLabel::ExactMatch,       TripleLabel::OtherFromInputGraph,
    TripleLabel::Repetition,       TripleLabel::OOSEntityGenerated,
    TripleLabel::OOSPropertyGenerated, TripleLabel::NoiseGenerated,
    TripleLabel::NotInKB,          TripleLabel::OffGraph,
};

inline TripleVerdict classify_triple(const ParsedOutput& parsed, const EvalInstance& inst,
                                     const KnowledgeBase& kb) {
  TripleVerdict v;
  v.instance_id = inst.id();
  v.triple = parsed.predicted_triple;
  if (parsed.predicted_triple) v.vocab = kb.vocab_membership(*parsed.predicted_triple);
  if (!parsed.wellformed_triple || !parsed.predicted_triple) {
    v.primary = TripleLabel::IllFormed;
    v.all_labels = {TripleLabel::IllFormed};
    return v;
  }
  const Triple& t = *parsed.predicted_triple;
  bool in_prefix = false;
  for (const Turn& turn : inst.prefix)
    if (turn.triple == t) { in_prefix = true; break; }
  const bool in_base = inst.graph.in_base(t);

  if (t == inst.target.triple) v.all_labels.insert(TripleLabel::ExactMatch);
  if (in_base && !in_prefix) v.all_labels.insert(TripleLabel::OtherFromInputGraph);
  if (in_prefix) v.all_labels.insert(TripleLabel::Repetition);
  for (const auto& [dt, tag] : inst.graph.distractors) {
    if (dt == t) {
      switch (tag) {
        case DistractorTag::OOSEntity: v.all_labels.insert(TripleLabel::OOSEntityGenerated); break;
        case DistractorTag::OOSProperty:
          v.all_labels.insert(TripleLabel::OOSPropertyGenerated);
          break;
        case DistractorTag::Noise: v.all_labels.insert(TripleLabel::NoiseGenerated); break;
        case DistractorTag::Relevant: break;
      }
    }
  }
  if (!kb.contains(t)) v.all_labels.insert(TripleLabel::NotInKB);
  if (v.all_labels.empty()) v.all_labels.insert(TripleLabel::OffGraph);

  for (TripleLabel l : primary_label_order) {
    if (v.all_labels.count(l)) {
      v.primary = l;
      break;
    }
  }
  v.relevant = v.primary == TripleLabel::ExactMatch ||
               v.primary == TripleLabel::OtherFromInputGraph;

  if (!in_base) {
    if (const EntityMeta* m = kb.entity(t.subject))
      v.oos_entity_predicate = !m->category.empty() && m->category == inst.category;
    for (const Triple& b : inst.graph.base)
      if (b.property == t.property) { v.oos_property_predicate = true; break; }
  }
  return v;
}

// Aggregate counts for one evaluation condition.
struct TripleCounts {
  std::size_t total = 0;
  std::size_t relevant = 0;
  std::map<TripleLabel, std::size_t> primary;
  std::map<TripleLabel, std::size_t> any;  // label ∈ all_labels
  std::size_t oos_entity_predicate = 0;
  std::size_t oos_property_predicate = 0;
  std::size_t subject_unknown = 0;  // among extracted triples
  std::size_t property_unknown = 0;
  std::size_t object_unknown = 0;
  std::set<std::string> distinct_triples;

  void add(const TripleVerdict& v) {
    ++total;
    if (v.relevant) ++relevant;
    ++primary[v.primary];
    for (TripleLabel l : v.all_labels) ++any[l];
    if (v.oos_entity_predicate) ++oos_entity_predicate;
    if (v.oos_property_predicate) ++oos_property_predicate;
    if (v.triple) {
      distinct_triples.insert(v.triple->key());
      if (!v.vocab.subject) ++subject_unknown;
      if (!v.vocab.property) ++property_unknown;
      if (!v.vocab.object) ++object_unknown;
    }
  }

  void merge(const TripleCounts& o) {
    total += o.total;
    relevant += o.relevant;
    for (auto& [l, c] : o.primary) primary[l] += c;
    for (auto& [l, c] : o.any) any[l] += c;
    oos_entity_predicate += o.oos_entity_predicate;
    oos_property_predicate += o.oos_property_predicate;
    subject_unknown += o.subject_unknown;
    property_unknown += o.property_unknown;
    object_unknown += o.object_unknown;
    distinct_triples.insert(o.distinct_triples.begin(), o.distinct_triples.end());
  }
};

// Report keyed by (context type, n); n = -1 rows aggregate over all n.
struct TripleReport {
  std::map<std::pair<ContextType, int>, TripleCounts> by_condition;

  void add(const TripleVerdict& v, ContextType ct, int n) {
    by_condition[{ct, n}].add(v);
    by_condition[{ct, -1}].add(v);
  }
};

inline TripleReport aggregate_triple_report(const std::vector<TripleVerdict>& verdicts) {
  TripleReport r;
  for (const TripleVerdict& v : verdicts) {
    auto parts = parse_instance_id(v.instance_id);
    if (!parts) throw ValidationError("unparseable instance id: " + v.instance_id);
    r.add(v, parts->context_type, parts->n);
  }
  return r;
}

// The paper rounds shares to whole percentages.
inline long percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return 0;
  return std::lround(100.0 * static_cast<double>(part) / static_cast<double>(whole));
}

}  // namespace kgqg
