#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgqg/jsonl.hpp"
#include "kgqg/triple.hpp"

namespace kgqg {

struct EntityMeta {
  std::string id;
  std::string label;
  std::string category;
  Gender gender = Gender::Neutral;
};

struct VocabFlags {
  bool subject = false;
  bool property = false;
  bool object = false;
};

// Immutable triple store plus entity registry and per-triple reference
// verbalizations. Built once by load_kb, then read-only: concurrent reads
// are safe. Triples are kept in canonical sorted order so a KB loaded
// from any permutation of the same records behaves identically.
class KnowledgeBase {
 public:
  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  std::size_t duplicate_warnings() const { return duplicate_warnings_; }

  bool contains(const Triple& t) const { return membership_.count(t.key()) > 0; }

  const std::vector<std::size_t>& by_subject(const std::string& s) const {
    return lookup(by_subject_, normalize_ws(s));
  }
  const std::vector<std::size_t>& by_property(const std::string& p) const {
    return lookup(by_property_, normalize_ws(p));
  }
  const std::vector<std::size_t>& by_subject_category(const std::string& cat) const {
    return lookup(by_subject_category_, normalize_ws(cat));
  }

  // Component-level membership: does each slot occur in that role anywhere
  // in the KB? Objects also count as known when they name a registered
  // entity (by id or label).
  VocabFlags vocab_membership(const Triple& t) const {
    VocabFlags f;
    f.subject = subject_vocab_set_.count(t.subject) > 0;
    f.property = property_vocab_set_.count(t.property) > 0;
    f.object = object_vocab_set_.count(t.object) > 0 || is_entity(t.object);
    return f;
  }

  bool is_entity(const std::string& name) const { return entity(name) != nullptr; }

  // Resolve by id first, then by label. Null for literals.
  const EntityMeta* entity(const std::string& name) const {
    std::string n = normalize_ws(name);
    auto it = entity_meta_.find(n);
    if (it != entity_meta_.end()) return &it->second;
    auto lt = label_to_id_.find(n);
    if (lt != label_to_id_.end()) return &entity_meta_.at(lt->second);
    return nullptr;
  }

  Gender gender_of(const std::string& name) const {
    const EntityMeta* m = entity(name);
    return m ? m->gender : Gender::Neutral;
  }

  const std::vector<std::string>* verbalizations(const Triple& t) const {
    auto it = verbalizations_.find(t.key());
    return it == verbalizations_.end() ? nullptr : &it->second;
  }

  // Role vocabularies in sorted order, for deterministic sampling.
  const std::vector<std::string>& subject_vocab() const { return subject_vocab_; }
  const std::vector<std::string>& property_vocab() const { return property_vocab_; }
  const std::vector<std::string>& object_vocab() const { return object_vocab_; }

  const std::map<std::string, EntityMeta>& entity_meta() const { return entity_meta_; }
  const std::unordered_map<std::string, std::vector<std::string>>& verbalization_map() const {
    return verbalizations_;
  }

  friend class KbBuilder;

 private:
  static const std::vector<std::size_t>& lookup(
      const std::unordered_map<std::string, std::vector<std::size_t>>& index,
      const std::string& k) {
    static const std::vector<std::size_t> empty;
    auto it = index.find(k);
    return it == index.end() ? empty : it->second;
  }

  std::vector<Triple> triples_;
  std::unordered_set<std::string> membership_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_property_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject_category_;
  std::map<std::string, EntityMeta> entity_meta_;  // keyed by id, sorted for round trips
  std::unordered_map<std::string, std::string> label_to_id_;
  std::unordered_map<std::string, std::vector<std::string>> verbalizations_;
  std::vector<std::string> subject_vocab_, property_vocab_, object_vocab_;
  std::unordered_set<std::string> subject_vocab_set_, property_vocab_set_, object_vocab_set_;
  std::size_t duplicate_warnings_ = 0;
};

class KbBuilder {
 public:
  void add_triple(const Triple& t) {
    if (keys_.insert(t.key()).second)
      triples_.push_back(t);
    else
      ++duplicates_;
  }

  void add_entity(EntityMeta m) {
    m.id = normalize_ws(m.id);
    m.label = normalize_ws(m.label);
    m.category = normalize_ws(m.category);
    entities_[m.id] = std::move(m);
  }

  void add_verbalizations(const Triple& t, std::vector<std::string> questions) {
    auto& qs = verbalizations_[t.key()];
    for (auto& q : questions) qs.push_back(trim(q));
  }

  KnowledgeBase freeze() && {
    KnowledgeBase kb;
    std::sort(triples_.begin(), triples_.end());
    kb.triples_ = std::move(triples_);
    kb.membership_ = std::move(keys_);
    kb.duplicate_warnings_ = duplicates_;
    for (auto& [id, meta] : entities_) {
      kb.entity_meta_[id] = meta;
      kb.label_to_id_.emplace(meta.label, id);
    }
    // Every subject is an entity; register the ones the metadata file
    // did not cover so gender lookups always have a home (Neutral).
    for (const Triple& t : kb.triples_) {
      if (!kb.entity_meta_.count(t.subject) && !kb.label_to_id_.count(t.subject)) {
        kb.entity_meta_[t.subject] = EntityMeta{t.subject, t.subject, "", Gender::Neutral};
        kb.label_to_id_.emplace(t.subject, t.subject);
      }
    }
    for (std::size_t i = 0; i < kb.triples_.size(); ++i) {
      const Triple& t = kb.triples_[i];
      kb.by_subject_[t.subject].push_back(i);
      kb.by_property_[t.property].push_back(i);
      if (const EntityMeta* m = kb.entity(t.subject); m && !m->category.empty())
        kb.by_subject_category_[m->category].push_back(i);
      if (kb.subject_vocab_set_.insert(t.subject).second) kb.subject_vocab_.push_back(t.subject);
      if (kb.property_vocab_set_.insert(t.property).second) kb.property_vocab_.push_back(t.property);
      if (kb.object_vocab_set_.insert(t.object).second) kb.object_vocab_.push_back(t.object);
    }
    std::sort(kb.subject_vocab_.begin(), kb.subject_vocab_.end());
    std::sort(kb.property_vocab_.begin(), kb.property_vocab_.end());
    std::sort(kb.object_vocab_.begin(), kb.object_vocab_.end());
    kb.verbalizations_ = std::move(verbalizations_);
    return kb;
  }

 private:
  std::vector<Triple> triples_;
  std::unordered_set<std::string> keys_;
  std::map<std::string, EntityMeta> entities_;
  std::unordered_map<std::string, std::vector<std::string>> verbalizations_;
  std::size_t duplicates_ = 0;
};

inline Gender parse_gender(const json& g, const std::string& file, std::size_t line) {
  if (g.is_null()) return Gender::Neutral;
  if (g.is_string()) {
    const std::string s = g.get<std::string>();
    if (s == "M") return Gender::Masculine;
    if (s == "F") return Gender::Feminine;
    if (s == "O") return Gender::OtherGender;
  }
  throw MalformedRecord(file, line, "gender must be \"M\", \"F\", \"O\" or null");
}

inline std::string gender_code(Gender g) {
  switch (g) {
    case Gender::Masculine: return "M";
    case Gender::Feminine: return "F";
    case Gender::OtherGender: return "O";
    case Gender::Neutral: return "";
  }
  return "";
}

// Load a KB from its three JSONL files. Entity metadata and
// verbalizations are optional sidecars.
inline KnowledgeBase load_kb(const std::filesystem::path& triples_path,
                             const std::filesystem::path& entities_path = {},
                             const std::filesystem::path& verbalizations_path = {}) {
  KbBuilder b;
  const std::string tf = triples_path.string();
  for_each_jsonl(triples_path, [&](const json& rec, std::size_t line) {
    b.add_triple(triple_from_record(rec, tf, line));
  });
  if (!entities_path.empty()) {
    const std::string ef = entities_path.string();
    for_each_jsonl(entities_path, [&](const json& rec, std::size_t line) {
      EntityMeta m;
      m.id = require_string(rec, "id", ef, line);
      m.label = require_string(rec, "label", ef, line);
      m.category = require_string(rec, "category", ef, line);
      m.gender = parse_gender(rec.contains("gender") ? rec.at("gender") : json(nullptr), ef, line);
      if (normalize_ws(m.id).empty()) throw MalformedRecord(ef, line, "empty entity id");
      b.add_entity(std::move(m));
    });
  }
  if (!verbalizations_path.empty()) {
    const std::string vf = verbalizations_path.string();
    for_each_jsonl(verbalizations_path, [&](const json& rec, std::size_t line) {
      Triple t = triple_from_record(rec, vf, line);
      auto it = rec.find("questions");
      if (it == rec.end() || !it->is_array() || it->empty())
        throw MalformedRecord(vf, line, "'questions' must be a non-empty array");
      std::vector<std::string> qs;
      for (const auto& q : *it) {
        if (!q.is_string()) throw MalformedRecord(vf, line, "verbalization must be a string");
        qs.push_back(q.get<std::string>());
      }
      b.add_verbalizations(t, std::move(qs));
    });
  }
  return std::move(b).freeze();
}

// Directory convention: kb.jsonl (+ entities.jsonl, verbalizations.jsonl).
inline KnowledgeBase load_kb_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::path ents = dir / "entities.jsonl";
  fs::path verbs = dir / "verbalizations.jsonl";
  return load_kb(dir / "kb.jsonl", fs::exists(ents) ? ents : fs::path{},
                 fs::exists(verbs) ? verbs : fs::path{});
}

inline KnowledgeBase load_kb_any(const std::filesystem::path& path) {
  return std::filesystem::is_directory(path) ? load_kb_dir(path) : load_kb(path);
}

inline void write_kb(const KnowledgeBase& kb, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  JsonlWriter tw(dir / "kb.jsonl");
  for (const Triple& t : kb.triples())
    tw.write({{"s", t.subject}, {"p", t.property}, {"o", t.object}});
  tw.close();
  JsonlWriter ew(dir / "entities.jsonl");
  for (const auto& [id, m] : kb.entity_meta()) {
    json g = m.gender == Gender::Neutral ? json(nullptr) : json(gender_code(m.gender));
    ew.write({{"id", m.id}, {"label", m.label}, {"category", m.category}, {"gender", g}});
  }
  ew.close();
  JsonlWriter vw(dir / "verbalizations.jsonl");
  std::vector<std::pair<std::string, const std::vector<std::string>*>> verbs;
  for (const auto& [key, qs] : kb.verbalization_map()) verbs.emplace_back(key, &qs);
  std::sort(verbs.begin(), verbs.end());
  for (const auto& [key, qs] : verbs) {
    std::size_t a = key.find('\x1f'), b = key.rfind('\x1f');
    vw.write({{"s", key.substr(0, a)},
              {"p", key.substr(a + 1, b - a - 1)},
              {"o", key.substr(b + 1)},
              {"questions", *qs}});
  }
  vw.close();
}

}  // namespace kgqg
