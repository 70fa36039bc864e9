#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgqg/dataset.hpp"
#include "kgqg/kb.hpp"
#include "kgqg/rng.hpp"

namespace kgqg {

enum class DistractorTag { Relevant, OOSEntity, OOSProperty, Noise };

inline std::string_view to_string(DistractorTag t) {
  switch (t) {
    case DistractorTag::Relevant: return "relevant";
    case DistractorTag::OOSEntity: return "oos_entity";
    case DistractorTag::OOSProperty: return "oos_property";
    case DistractorTag::Noise: return "noise";
  }
  return "relevant";
}

inline std::optional<DistractorTag> parse_distractor_tag(std::string_view s) {
  if (s == "relevant") return DistractorTag::Relevant;
  if (s == "oos_entity") return DistractorTag::OOSEntity;
  if (s == "oos_property") return DistractorTag::OOSProperty;
  if (s == "noise") return DistractorTag::Noise;
  return std::nullopt;
}

// K⁺ₙ: the dialog's grounding graph plus tagged distractors, with the
// serialization order fixed at build time (seeded shuffle).
struct AugmentedGraph {
  std::vector<Triple> base;  // K_D, deduplicated, turn order
  std::vector<std::pair<Triple, DistractorTag>> distractors;
  int n = 0;
  std::size_t skipped_slots = 0;  // sampler slots that found no candidate
  std::vector<std::pair<Triple, DistractorTag>> order;  // base ∪ distractors, shuffled

  std::size_t total() const { return base.size() + distractors.size(); }

  bool in_base(const Triple& t) const {
    for (const Triple& b : base)
      if (b == t) return true;
    return false;
  }
};

using TripleKeySet = std::unordered_set<std::string>;

inline TripleKeySet key_set(const std::vector<Triple>& ts) {
  TripleKeySet s;
  for (const Triple& t : ts) s.insert(t.key());
  return s;
}

namespace detail {

// Uniform draw from the KB triples at `candidate_indices` that are in
// neither `base` nor `exclude`. Candidate order is the KB's canonical
// order, so the draw is reproducible for any input file permutation.
inline std::optional<Triple> draw_from(const KnowledgeBase& kb,
                                       const std::vector<std::size_t>& candidate_indices,
                                       const TripleKeySet& base, const TripleKeySet& exclude,
                                       Rng& rng) {
  std::vector<std::size_t> pool;
  pool.reserve(candidate_indices.size());
  for (std::size_t i : candidate_indices) {
    const std::string k = kb.triples()[i].key();
    if (!base.count(k) && !exclude.count(k)) pool.push_back(i);
  }
  if (pool.empty()) return std::nullopt;
  return kb.triples()[pool[rng.below(pool.size())]];
}

inline std::optional<Triple> sample_oos_entity(const KnowledgeBase& kb,
                                               const std::string& category,
                                               const TripleKeySet& base,
                                               const TripleKeySet& exclude, Rng& rng) {
  return draw_from(kb, kb.by_subject_category(category), base, exclude, rng);
}

inline std::optional<Triple> sample_oos_property(const KnowledgeBase& kb,
                                                 const std::vector<Triple>& base_triples,
                                                 const TripleKeySet& base,
                                                 const TripleKeySet& exclude, Rng& rng) {
  std::vector<std::size_t> candidates;
  std::unordered_set<std::string> props;
  for (const Triple& t : base_triples) props.insert(t.property);
  std::vector<std::string> sorted_props(props.begin(), props.end());
  std::sort(sorted_props.begin(), sorted_props.end());
  for (const std::string& p : sorted_props)
    for (std::size_t i : kb.by_property(p)) candidates.push_back(i);
  std::sort(candidates.begin(), candidates.end());
  return draw_from(kb, candidates, base, exclude, rng);
}

// Noise triples are synthetic: every slot comes from the KB vocabulary of
// its role, but the assembled triple must not be a KB fact (otherwise it
// would be indistinguishable from an out-of-scope triple downstream).
inline std::optional<Triple> sample_noise(const KnowledgeBase& kb, const TripleKeySet& base,
                                          const TripleKeySet& exclude, Rng& rng,
                                          int max_retries = 100) {
  if (kb.subject_vocab().empty() || kb.property_vocab().empty() || kb.object_vocab().empty())
    return std::nullopt;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Triple t{kb.subject_vocab()[rng.below(kb.subject_vocab().size())],
             kb.property_vocab()[rng.below(kb.property_vocab().size())],
             kb.object_vocab()[rng.below(kb.object_vocab().size())]};
    const std::string k = t.key();
    if (kb.contains(t) || base.count(k) || exclude.count(k)) continue;
    return t;
  }
  return std::nullopt;
}

}  // namespace detail

inline std::optional<Triple> sample_oos_entity(const KnowledgeBase& kb, const Dialog& d,
                                               Rng& rng, const TripleKeySet& exclude = {}) {
  return detail::sample_oos_entity(kb, d.category, key_set(d.base_graph()), exclude, rng);
}

inline std::optional<Triple> sample_oos_property(const KnowledgeBase& kb, const Dialog& d,
                                                 Rng& rng, const TripleKeySet& exclude = {}) {
  auto base = d.base_graph();
  return detail::sample_oos_property(kb, base, key_set(base), exclude, rng);
}

inline std::optional<Triple> sample_noise(const KnowledgeBase& kb, const Dialog& d, Rng& rng,
                                          const TripleKeySet& exclude = {},
                                          int max_retries = 100) {
  return detail::sample_noise(kb, key_set(d.base_graph()), exclude, rng, max_retries);
}

// Build K⁺ₙ. Draw order is round-robin over the three distractor types
// (entity, property, noise), n rounds, stopping globally once
// |distractors| = |K_D|. With the same rng start state the draw sequence
// for n is a prefix of the one for n+1, so distractor sets grow
// monotonically in n. NoCandidate slots are skipped and counted.
inline AugmentedGraph build_kplus(const KnowledgeBase& kb, const Dialog& d, int n, Rng& rng,
                                  int noise_max_retries = 100) {
  AugmentedGraph g;
  g.base = d.base_graph();
  g.n = n;
  TripleKeySet base_keys = key_set(g.base);
  TripleKeySet drawn;
  for (int round = 0; round < n; ++round) {
    for (DistractorTag tag :
         {DistractorTag::OOSEntity, DistractorTag::OOSProperty, DistractorTag::Noise}) {
      if (g.distractors.size() >= g.base.size()) break;
      std::optional<Triple> t;
      switch (tag) {
        case DistractorTag::OOSEntity:
          t = detail::sample_oos_entity(kb, d.category, base_keys, drawn, rng);
          break;
        case DistractorTag::OOSProperty:
          t = detail::sample_oos_property(kb, g.base, base_keys, drawn, rng);
          break;
        default:
          t = detail::sample_noise(kb, base_keys, drawn, rng, noise_max_retries);
          break;
      }
      if (t) {
        drawn.insert(t->key());
        g.distractors.emplace_back(std::move(*t), tag);
      } else {
        ++g.skipped_slots;
      }
    }
    if (g.distractors.size() >= g.base.size()) break;
  }
  for (const Triple& t : g.base) g.order.emplace_back(t, DistractorTag::Relevant);
  for (const auto& dt : g.distractors) g.order.push_back(dt);
  rng.shuffle(g.order);
  return g;
}

enum class Split { Train, Val, Test };

inline std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  return std::nullopt;
}

// Which dialog prefixes become evaluation contexts. A dialog with P turns
// has P possible prefixes (lengths 0..P-1). Test keeps all of them;
// train/val keep ⌈P/2⌉, uniformly without replacement, deterministically
// per (seed, dialog id).
inline std::vector<std::size_t> subsample_prefixes(const Dialog& d, Split split,
                                                   std::uint64_t seed) {
  const std::size_t P = d.turns.size();
  std::vector<std::size_t> all(P);
  for (std::size_t i = 0; i < P; ++i) all[i] = i;
  if (split == Split::Test) return all;
  Rng rng = derive_rng(seed, "subsample", d.id);
  rng.shuffle(all);
  all.resize((P + 1) / 2);
  std::sort(all.begin(), all.end());
  return all;
}

inline std::vector<std::pair<const Dialog*, std::size_t>> subsample_contexts(
    const std::vector<Dialog>& dialogs, Split split, std::uint64_t seed) {
  std::vector<std::pair<const Dialog*, std::size_t>> out;
  for (const Dialog& d : dialogs)
    for (std::size_t p : subsample_prefixes(d, split, seed)) out.emplace_back(&d, p);
  return out;
}

}  // namespace kgqg
