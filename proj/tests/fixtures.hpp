#pragma once

// Shared test fixtures: the worked examples from the dataset tables
// (Sitara Achakzai dialog, Herschel pronoun case) plus deterministic
// random corpora rich enough that all distractor samplers succeed.
// Brute-force reference implementations live here too; they must stay
// independent of the library code paths they check.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgqg/augment.hpp"
#include "kgqg/context.hpp"
#include "kgqg/dataset.hpp"
#include "kgqg/kb.hpp"
#include "kgqg/output_parser.hpp"
#include "kgqg/rng.hpp"
#include "kgqg/triple_eval.hpp"

namespace fixtures {

using namespace kgqg;

// ---- the 5-triple example KB and dialog ----

inline KnowledgeBase example_kb() {
  KbBuilder b;
  const Triple t1 = Triple::make("Sitara Achakzai", "field of work", "feminism");
  const Triple t2 = Triple::make("Sitara Achakzai", "death manner", "murder");
  const Triple t3 = Triple::make("Sitara Achakzai", "birthplace", "Afghanistan");
  const Triple t4 = Triple::make("Afghanistan", "capital", "Kabul");
  const Triple t5 = Triple::make("Afghanistan", "lowest point", "Amu Darya");
  for (const Triple& t : {t1, t2, t3, t4, t5}) b.add_triple(t);
  b.add_entity({"Sitara Achakzai", "Sitara Achakzai", "person", Gender::Feminine});
  b.add_entity({"Afghanistan", "Afghanistan", "country", Gender::Neutral});
  b.add_entity({"Kabul", "Kabul", "city", Gender::Neutral});
  b.add_verbalizations(t1, {"What was the field of work of Sitara Achakzai?"});
  b.add_verbalizations(t2, {"What was the cause of death of Achakzai?"});
  b.add_verbalizations(t3, {"Where was she born ?"});
  b.add_verbalizations(t4, {"What is the capital of Afghanistan?"});
  b.add_verbalizations(t5, {"What is the lowest point of Afghanistan?"});
  return std::move(b).freeze();
}

inline Dialog example_dialog() {
  Dialog d;
  d.id = "achakzai";
  d.root_entity = "Sitara Achakzai";
  d.category = "person";
  d.turns = {
      {Triple::make("Sitara Achakzai", "field of work", "feminism"),
       "What was the field of work of Sitara Achakzai?", "feminism"},
      {Triple::make("Sitara Achakzai", "death manner", "murder"),
       "What was the cause of death of Achakzai?", "homicide"},
      {Triple::make("Sitara Achakzai", "birthplace", "Afghanistan"), "Where was she born ?",
       "Afghanistan"},
      {Triple::make("Afghanistan", "capital", "Kabul"), "What is the capital of Afghanistan?",
       "Kabul"},
      {Triple::make("Afghanistan", "lowest point", "Amu Darya"),
       "What is the lowest point of Afghanistan?", "Amu Darya"},
  };
  return d;
}

// The worked-example instance: generation of the third question, the
// graph serialized in the order the input table shows.
inline EvalInstance example_instance(ContextType ct) {
  Dialog d = example_dialog();
  EvalInstance inst;
  inst.dialog_id = d.id;
  inst.prefix = {d.turns[0], d.turns[1]};
  inst.context_type = ct;
  inst.root_entity = d.root_entity;
  inst.category = d.category;
  inst.target = d.turns[2];
  inst.graph.base = d.base_graph();
  inst.graph.n = 0;
  for (const Triple& t : {Triple::make("Afghanistan", "lowest point", "Amu Darya"),
                          Triple::make("Sitara Achakzai", "birthplace", "Afghanistan"),
                          Triple::make("Sitara Achakzai", "field of work", "feminism"),
                          Triple::make("Sitara Achakzai", "death manner", "murder"),
                          Triple::make("Afghanistan", "capital", "Kabul")})
    inst.graph.order.emplace_back(t, DistractorTag::Relevant);
  return inst;
}

// ---- the gender-ambiguity worked example ----

inline KnowledgeBase herschel_kb() {
  KbBuilder b;
  const Triple t1 = Triple::make("NGC 2539", "discoverer or inventor", "William Herschel");
  const Triple t2 = Triple::make("NGC 2539", "constellation", "Puppis");
  const Triple t3 = Triple::make("William Herschel", "student of", "Nevil Maskelyne");
  const Triple t4 = Triple::make("William Herschel", "place of burial", "Westminster Abbey");
  for (const Triple& t : {t1, t2, t3, t4}) b.add_triple(t);
  b.add_entity({"William Herschel", "William Herschel", "person", Gender::Masculine});
  b.add_entity({"Nevil Maskelyne", "Nevil Maskelyne", "person", Gender::Masculine});
  b.add_entity({"NGC 2539", "NGC 2539", "astronomical object", Gender::Neutral});
  b.add_entity({"Puppis", "Puppis", "constellation", Gender::Neutral});
  b.add_verbalizations(t1, {"Who found NGC 2423?"});
  b.add_verbalizations(t2, {"What is the name of the constellation which NGC 2423 belongs?"});
  b.add_verbalizations(t3, {"What was the name of Herschel's teacher?"});
  b.add_verbalizations(t4, {"where was he buried?"});
  return std::move(b).freeze();
}

inline Dialog herschel_dialog() {
  Dialog d;
  d.id = "herschel";
  d.root_entity = "NGC 2539";
  d.category = "astronomical object";
  d.turns = {
      {Triple::make("NGC 2539", "discoverer or inventor", "William Herschel"),
       "Who found NGC 2423?", "William Herschel"},
      {Triple::make("NGC 2539", "constellation", "Puppis"),
       "What is the name of the constellation which NGC 2423 belongs?", "Puppis"},
      {Triple::make("William Herschel", "student of", "Nevil Maskelyne"),
       "What was the name of Herschel's teacher?", "Nevil Maskelyne"},
      {Triple::make("William Herschel", "place of burial", "Westminster Abbey"),
       "where was he buried?", "Westminster Abbey"},
  };
  return d;
}

// ---- random corpora ----

struct Corpus {
  KnowledgeBase kb;
  std::vector<Dialog> dialogs;
};

// A corpus whose KB is rich enough that every distractor sampler has
// candidates for n ≤ 3 on every dialog: many subjects per category, a
// shared property pool, and a combination space much larger than the KB.
inline Corpus rich_corpus(std::uint64_t seed, std::size_t n_dialogs,
                          std::size_t min_turns = 5, std::size_t max_turns = 8) {
  Rng r(splitmix64(seed));
  const std::size_t n_categories = 5;
  const std::size_t subjects_per_cat = 12;
  std::vector<std::string> properties = {
      "capital",     "lowest point", "field of work", "death manner", "birthplace",
      "population",  "anthem",       "head of state", "spouse",       "discoverer",
      "constellation", "highest peak"};
  std::vector<std::string> literals;
  for (std::size_t i = 0; i < 40; ++i) literals.push_back("value" + std::to_string(i));

  KbBuilder b;
  std::vector<std::vector<std::string>> subjects(n_categories);
  std::map<std::string, Gender> gender_map;
  std::vector<Gender> genders = {Gender::Masculine, Gender::Feminine, Gender::Neutral,
                                 Gender::OtherGender};
  for (std::size_t c = 0; c < n_categories; ++c) {
    for (std::size_t s = 0; s < subjects_per_cat; ++s) {
      std::string name = "Entity C" + std::to_string(c) + " N" + std::to_string(s);
      subjects[c].push_back(name);
      Gender g = c < 2 ? genders[r.below(genders.size())] : Gender::Neutral;
      gender_map[name] = g;
      b.add_entity({name, name, "category" + std::to_string(c), g});
    }
  }
  std::vector<Triple> kb_triples;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < n_categories; ++c) {
    for (const std::string& subj : subjects[c]) {
      const std::size_t k = 4 + r.below(4);
      for (std::size_t i = 0; i < k; ++i) {
        const std::string& prop = properties[r.below(properties.size())];
        std::string obj;
        if (r.below(3) == 0) {
          const auto& pool = subjects[r.below(n_categories)];
          obj = pool[r.below(pool.size())];
        } else {
          obj = literals[r.below(literals.size())];
        }
        Triple t = Triple::make(subj, prop, obj);
        if (!seen.insert(t.key()).second) continue;
        kb_triples.push_back(t);
        b.add_triple(t);
      }
    }
  }
  for (std::size_t i = 0; i < kb_triples.size(); ++i) {
    const Triple& t = kb_triples[i];
    std::vector<std::string> qs;
    if (i % 5 == 0) {
      // pronominalized first verbalization, gender matching the registry
      Gender g = gender_map.count(t.subject) ? gender_map[t.subject] : Gender::Neutral;
      const char* pron = g == Gender::Feminine ? "she" : g == Gender::Masculine ? "he" : "it";
      qs.push_back(std::string(pron) + " has which " + t.property + "?");
    }
    qs.push_back("What is the " + t.property + " of " + t.subject + "?");
    if (i % 3 == 0) qs.push_back("Do you know the " + t.property + " of " + t.subject + "?");
    b.add_verbalizations(t, qs);
  }
  Corpus corpus{std::move(b).freeze(), {}};

  // dialogs: chain triples starting from a root subject; attempts that
  // run out of fresh triples too early are discarded and retried
  for (std::size_t i = 0; corpus.dialogs.size() < n_dialogs && i < n_dialogs * 10; ++i) {
    Rng dr = derive_rng(seed, "fixture-dialog", std::to_string(i));
    const std::size_t c = dr.below(n_categories);
    const std::string& root = subjects[c][dr.below(subjects_per_cat)];
    const auto& root_idx = corpus.kb.by_subject(root);
    if (root_idx.empty()) continue;
    Dialog d;
    d.id = "d" + std::to_string(i);
    d.root_entity = root;
    d.category = "category" + std::to_string(c);
    std::set<std::string> used;
    std::string current = root;
    const std::size_t want = min_turns + dr.below(max_turns - min_turns + 1);
    while (d.turns.size() < want) {
      const auto& idx = corpus.kb.by_subject(current);
      std::vector<std::size_t> fresh;
      for (std::size_t j : idx)
        if (!used.count(corpus.kb.triples()[j].key())) fresh.push_back(j);
      if (fresh.empty()) {
        if (current == root) break;
        current = root;
        continue;
      }
      const Triple& t = corpus.kb.triples()[fresh[dr.below(fresh.size())]];
      used.insert(t.key());
      const std::vector<std::string>* verbs = corpus.kb.verbalizations(t);
      d.turns.push_back({t, verbs ? verbs->front() : ("What is the " + t.property + " of " +
                                                      t.subject + "?"),
                         t.object});
      // hop to the object when it is an entity, sometimes
      if (corpus.kb.is_entity(t.object) && dr.below(2) == 0) current = t.object;
    }
    if (d.turns.size() >= min_turns) corpus.dialogs.push_back(std::move(d));
  }
  return corpus;
}

// A deliberately starved corpus: one category, two properties, almost
// every candidate inside K_D, so samplers run out and the cap + skip
// accounting gets exercised.
inline Corpus sparse_corpus(std::uint64_t seed) {
  Rng r(splitmix64(seed));
  KbBuilder b;
  std::vector<Triple> ts;
  for (int i = 0; i < 6; ++i) {
    Triple t = Triple::make("subject" + std::to_string(i % 2), "prop" + std::to_string(i % 2),
                            "obj" + std::to_string(i));
    ts.push_back(t);
    b.add_triple(t);
    b.add_entity({t.subject, t.subject, "solo", Gender::Neutral});
  }
  for (const Triple& t : ts) b.add_verbalizations(t, {"What is " + t.object + "?"});
  Corpus corpus{std::move(b).freeze(), {}};
  Dialog d;
  d.id = "sparse" + std::to_string(r.below(1000));
  d.root_entity = ts[0].subject;
  d.category = "solo";
  for (const Triple& t : corpus.kb.triples())
    d.turns.push_back({t, "What is " + t.object + "?", t.object});
  // root entity must match the first turn
  d.root_entity = d.turns.front().triple.subject;
  corpus.dialogs.push_back(std::move(d));
  return corpus;
}

// ---- brute-force reference implementations ----

// Naive GLEU: materialize every n-gram as a string list, count matches by
// erase-from-a-copy. Tokenizer is reimplemented here on purpose.
inline double bf_gleu(const std::string& hyp, const std::string& ref, int max_order = 4,
                      bool split_punct = true) {
  auto tokenize = [&](const std::string& s) {
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : s) {
      unsigned char u = static_cast<unsigned char>(ch);
      bool alnum = (u >= 0x80) || std::isalnum(u);
      if (std::isspace(u)) {
        if (!cur.empty()) toks.push_back(cur), cur.clear();
      } else if (!alnum && split_punct) {
        if (!cur.empty()) toks.push_back(cur), cur.clear();
        toks.push_back(std::string(1, static_cast<char>(std::tolower(u))));
      } else {
        cur.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
      }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
  };
  std::vector<std::string> h = tokenize(hyp), r = tokenize(ref);
  if (h.empty() && r.empty()) return 1.0;
  if (h.empty() || r.empty()) return 0.0;
  const std::size_t cap = std::min<std::size_t>(static_cast<std::size_t>(max_order),
                                                std::min(h.size(), r.size()));
  auto grams = [](const std::vector<std::string>& toks, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      std::string g;
      for (std::size_t j = 0; j < n; ++j) g += toks[i + j] + "\x01";
      out.push_back(g);
    }
    return out;
  };
  double matched = 0, hyp_total = 0, ref_total = 0;
  for (std::size_t n = 1; n <= cap; ++n) {
    std::vector<std::string> hg = grams(h, n), rg = grams(r, n);
    hyp_total += static_cast<double>(hg.size());
    ref_total += static_cast<double>(rg.size());
    std::vector<std::string> pool = rg;
    for (const std::string& g : hg) {
      auto it = std::find(pool.begin(), pool.end(), g);
      if (it != pool.end()) {
        matched += 1;
        pool.erase(it);
      }
    }
  }
  if (hyp_total == 0 || ref_total == 0) return 0.0;
  return std::min(matched / hyp_total, matched / ref_total);
}

// Reference triple classifier, re-derived from the raw definitions with
// linear scans only (including KB membership).
inline TripleVerdict bf_classify(const ParsedOutput& parsed, const EvalInstance& inst,
                                 const KnowledgeBase& kb) {
  TripleVerdict v;
  v.instance_id = inst.id();
  v.triple = parsed.predicted_triple;
  auto scan_contains = [&](const Triple& t) {
    for (const Triple& u : kb.triples())
      if (u.subject == t.subject && u.property == t.property && u.object == t.object)
        return true;
    return false;
  };
  if (!parsed.wellformed_triple || !parsed.predicted_triple) {
    v.primary = TripleLabel::IllFormed;
    v.all_labels = {TripleLabel::IllFormed};
    return v;
  }
  const Triple& t = *parsed.predicted_triple;
  bool in_prefix = false;
  for (const Turn& turn : inst.prefix)
    if (turn.triple == t) in_prefix = true;
  bool in_base = false;
  for (const Triple& u : inst.graph.base)
    if (u == t) in_base = true;
  if (t == inst.target.triple) v.all_labels.insert(TripleLabel::ExactMatch);
  if (in_base && !in_prefix) v.all_labels.insert(TripleLabel::OtherFromInputGraph);
  if (in_prefix) v.all_labels.insert(TripleLabel::Repetition);
  for (const auto& [dt, tag] : inst.graph.distractors)
    if (dt == t) {
      if (tag == DistractorTag::OOSEntity) v.all_labels.insert(TripleLabel::OOSEntityGenerated);
      if (tag == DistractorTag::OOSProperty)
        v.all_labels.insert(TripleLabel::OOSPropertyGenerated);
      if (tag == DistractorTag::Noise) v.all_labels.insert(TripleLabel::NoiseGenerated);
    }
  if (!scan_contains(t)) v.all_labels.insert(TripleLabel::NotInKB);
  if (v.all_labels.empty()) v.all_labels.insert(TripleLabel::OffGraph);
  for (TripleLabel l :
       {TripleLabel::ExactMatch, TripleLabel::OtherFromInputGraph, TripleLabel::Repetition,
        TripleLabel::OOSEntityGenerated, TripleLabel::OOSPropertyGenerated,
        TripleLabel::NoiseGenerated, TripleLabel::NotInKB, TripleLabel::OffGraph})
    if (v.all_labels.count(l)) {
      v.primary = l;
      break;
    }
  v.relevant =
      v.primary == TripleLabel::ExactMatch || v.primary == TripleLabel::OtherFromInputGraph;
  return v;
}

inline std::string random_sentence(Rng& r, std::size_t max_len = 8) {
  static const std::vector<std::string> vocab = {"a",   "b",  "c",   "d",  "cat", "sat",
                                                 "the", "on", "mat", "?",  ",",   "dog"};
  std::size_t len = r.below(max_len + 1);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) {
    if (!out.empty()) out += ' ';
    out += vocab[r.below(vocab.size())];
  }
  return out;
}

}  // namespace fixtures
