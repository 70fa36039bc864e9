#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "kgqg/text.hpp"

namespace kgqg {

// Entity genders as recorded in the entity registry. Neutral is the
// default for entities without a gender record.
enum class Gender { Masculine, Feminine, OtherGender, Neutral };

inline std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Masculine: return "masculine";
    case Gender::Feminine: return "feminine";
    case Gender::OtherGender: return "other";
    case Gender::Neutral: return "neutral";
  }
  return "neutral";
}

// A (subject, property, object) fact. Fields are stored in whitespace
// normal form; equality is case-sensitive beyond that. The object may
// be an entity or a literal string — the KB decides which.
struct Triple {
  std::string subject;
  std::string property;
  std::string object;

  static std::optional<Triple> try_make(std::string_view s, std::string_view p,
                                        std::string_view o) {
    Triple t{normalize_ws(s), normalize_ws(p), normalize_ws(o)};
    if (t.subject.empty() || t.property.empty() || t.object.empty()) return std::nullopt;
    return t;
  }

  static Triple make(std::string_view s, std::string_view p, std::string_view o) {
    auto t = try_make(s, p, o);
    if (!t) throw std::invalid_argument("triple with empty component");
    return *t;
  }

  // Map key; \x1f cannot occur after normalization of sane inputs and is
  // harmless even if it does (keys are only compared to other keys).
  std::string key() const { return subject + '\x1f' + property + '\x1f' + object; }

  friend bool operator==(const Triple& a, const Triple& b) {
    return a.subject == b.subject && a.property == b.property && a.object == b.object;
  }
  friend bool operator<(const Triple& a, const Triple& b) {
    return std::tie(a.subject, a.property, a.object) <
           std::tie(b.subject, b.property, b.object);
  }
};

}  // namespace kgqg
