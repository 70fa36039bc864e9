#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgqg/augment.hpp"
#include "kgqg/context.hpp"
#include "kgqg/errors.hpp"
#include "kgqg/kb.hpp"
#include "kgqg/rng.hpp"

namespace kgqg {

// Deterministic stand-in models, each pinning one region of the verdict
// space, so the whole pipeline is testable end to end without a neural
// component.
enum class OraclePolicy {
  PerfectVerbalizer,  // target triple + its first stored verbalization
  Repeater,           // last prefix turn's triple and question
  Hallucinator,       // synthetic noise triple + templated question
  QuestionOnlyPerfect,
};

inline std::optional<OraclePolicy> parse_oracle_policy(std::string_view s) {
  if (s == "perfect") return OraclePolicy::PerfectVerbalizer;
  if (s == "repeater") return OraclePolicy::Repeater;
  if (s == "hallucinator") return OraclePolicy::Hallucinator;
  if (s == "question-only-perfect") return OraclePolicy::QuestionOnlyPerfect;
  return std::nullopt;
}

inline std::string_view to_string(OraclePolicy p) {
  switch (p) {
    case OraclePolicy::PerfectVerbalizer: return "perfect";
    case OraclePolicy::Repeater: return "repeater";
    case OraclePolicy::Hallucinator: return "hallucinator";
    case OraclePolicy::QuestionOnlyPerfect: return "question-only-perfect";
  }
  return "perfect";
}

inline std::string extended_output(const Triple& t, const std::string& question) {
  return "[TRIPLE] " + serialize_triple(t) + " [QUESTION] " + question;
}

inline std::string oracle_output(const EvalInstance& inst, OraclePolicy policy,
                                 const KnowledgeBase& kb, Rng& rng) {
  switch (policy) {
    case OraclePolicy::PerfectVerbalizer: {
      const std::vector<std::string>* refs = kb.verbalizations(inst.target.triple);
      if (!refs || refs->empty())
        throw MissingVerbalization("no verbalization for target of " + inst.id());
      return extended_output(inst.target.triple, refs->front());
    }
    case OraclePolicy::Repeater: {
      if (!inst.prefix.empty()) {
        const Turn& last = inst.prefix.back();
        return extended_output(last.triple, last.question);
      }
      return extended_output(inst.graph.base.front(), inst.target.question);
    }
    case OraclePolicy::Hallucinator: {
      TripleKeySet base_keys = key_set(inst.graph.base);
      std::optional<Triple> t = detail::sample_noise(kb, base_keys, {}, rng);
      if (!t) {
        // vocabulary too small to assemble a non-fact; fall back to a
        // marked synthetic triple that is certainly not in the KB
        t = Triple::make("__hallucinated__", "__unknown__", inst.id());
      }
      return extended_output(*t, "What is the " + t->property + " of " + t->subject + "?");
    }
    case OraclePolicy::QuestionOnlyPerfect: {
      const std::vector<std::string>* refs = kb.verbalizations(inst.target.triple);
      if (!refs || refs->empty())
        throw MissingVerbalization("no verbalization for target of " + inst.id());
      return refs->front();
    }
  }
  throw ValidationError("unknown oracle policy");
}

inline std::vector<PredictionRecord> run_oracle(const std::vector<EvalInstance>& instances,
                                                OraclePolicy policy, const KnowledgeBase& kb,
                                                std::uint64_t seed) {
  std::vector<PredictionRecord> out;
  out.reserve(instances.size());
  for (const EvalInstance& inst : instances) {
    Rng rng = derive_rng(seed, "oracle", inst.id());
    out.push_back({inst.id(), oracle_output(inst, policy, kb, rng)});
  }
  return out;
}

}  // namespace kgqg
