#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgqg/context.hpp"
#include "kgqg/errors.hpp"
#include "kgqg/kb.hpp"
#include "kgqg/output_parser.hpp"
#include "kgqg/text.hpp"

namespace kgqg {

struct GleuOptions {
  int max_order = 4;
  bool split_punct = true;  // GLEU tokenization: lowercase + punctuation split
};

// Sentence-level Google BLEU: pooled clipped n-gram matches over orders
// 1..min(max_order, |hyp|, |ref|); score = min(precision, recall). The
// length cap keeps the score symmetric and gives 0/0 → 1 only when both
// strings are empty.
struct GleuScore {
  double value = 0.0;
  std::uint64_t matched_ngrams = 0;
  std::uint64_t hyp_ngrams = 0;
  std::uint64_t ref_ngrams = 0;
  int max_order = 4;
};

inline GleuScore gleu(std::string_view hypothesis, std::string_view reference,
                      const GleuOptions& opt = {}) {
  GleuScore s;
  s.max_order = opt.max_order;
  const std::vector<std::string> hyp = gleu_tokens(hypothesis, opt.split_punct);
  const std::vector<std::string> ref = gleu_tokens(reference, opt.split_punct);
  if (hyp.empty() && ref.empty()) {
    s.value = 1.0;
    return s;
  }
  const std::size_t cap =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(opt.max_order, 1)),
                            std::min(hyp.size(), ref.size()));
  auto ngram_counts = [](const std::vector<std::string>& toks, std::size_t n) {
    std::unordered_map<std::string, std::uint64_t> counts;
    if (toks.size() < n) return counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      std::string key = toks[i];
      for (std::size_t j = 1; j < n; ++j) key += '\x1f' + toks[i + j];
      ++counts[key];
    }
    return counts;
  };
  for (std::size_t n = 1; n <= cap; ++n) {
    auto hc = ngram_counts(hyp, n);
    auto rc = ngram_counts(ref, n);
    for (const auto& [g, c] : hc) {
      auto it = rc.find(g);
      if (it != rc.end()) s.matched_ngrams += std::min(c, it->second);
    }
    if (hyp.size() >= n) s.hyp_ngrams += hyp.size() - n + 1;
    if (ref.size() >= n) s.ref_ngrams += ref.size() - n + 1;
  }
  if (s.hyp_ngrams == 0 || s.ref_ngrams == 0) {
    s.value = 0.0;
    return s;
  }
  const double precision = static_cast<double>(s.matched_ngrams) / s.hyp_ngrams;
  const double recall = static_cast<double>(s.matched_ngrams) / s.ref_ngrams;
  s.value = std::min(precision, recall);
  return s;
}

// Best score over a reference set; ties resolve to the first index.
inline std::pair<GleuScore, std::size_t> max_gleu(std::string_view hypothesis,
                                                  const std::vector<std::string>& references,
                                                  const GleuOptions& opt = {}) {
  if (references.empty()) throw EmptyReferenceSet("max_gleu needs at least one reference");
  GleuScore best;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    GleuScore s = gleu(hypothesis, references[i], opt);
    if (i == 0 || s.value > best.value) {
      best = s;
      best_idx = i;
    }
  }
  return {best, best_idx};
}

enum class ScoreSkip { IllFormed, NoVerbalizations, EmptyPool };

inline std::string_view to_string(ScoreSkip r) {
  switch (r) {
    case ScoreSkip::IllFormed: return "ill_formed";
    case ScoreSkip::NoVerbalizations: return "no_verbalizations";
    case ScoreSkip::EmptyPool: return "empty_pool";
  }
  return "ill_formed";
}

struct ScoredGleu {
  std::optional<GleuScore> score;
  std::optional<ScoreSkip> skip;
};

// Triple↔question consistency: the generated question against the stored
// verbalizations of the triple it was conditioned on.
inline ScoredGleu score_triple_question(const ParsedOutput& parsed, const KnowledgeBase& kb,
                                        const GleuOptions& opt = {}) {
  if (!parsed.wellformed_triple || !parsed.predicted_triple)
    return {std::nullopt, ScoreSkip::IllFormed};
  const std::vector<std::string>* refs = kb.verbalizations(*parsed.predicted_triple);
  if (!refs || refs->empty()) return {std::nullopt, ScoreSkip::NoVerbalizations};
  return {max_gleu(parsed.question, *refs, opt).first, std::nullopt};
}

// Multi-reference question quality: max GLEU against the verbalizations
// of every correct triple (in K_D, not already used by the prefix).
inline ScoredGleu score_question_quality(const std::string& question, const EvalInstance& inst,
                                         const KnowledgeBase& kb, const GleuOptions& opt = {}) {
  TripleKeySet used;
  for (const Turn& t : inst.prefix) used.insert(t.triple.key());
  std::vector<std::string> pool;
  for (const Triple& t : inst.graph.base) {
    if (used.count(t.key())) continue;
    if (const std::vector<std::string>* refs = kb.verbalizations(t))
      pool.insert(pool.end(), refs->begin(), refs->end());
  }
  if (pool.empty()) return {std::nullopt, ScoreSkip::EmptyPool};
  return {max_gleu(question, pool, opt).first, std::nullopt};
}

}  // namespace kgqg
