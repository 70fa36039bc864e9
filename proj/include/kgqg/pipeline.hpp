#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "kgqg/oracle.hpp"
#include "kgqg/records.hpp"
#include "kgqg/report.hpp"

namespace kgqg {

// Parallel map with deterministic output: results land at their input
// index, so worker count never changes what gets written.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(count));
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += jobs) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

struct RunConfig {
  std::uint64_t seed = 0;
  std::vector<ContextType> context_types{all_context_types.begin(), all_context_types.end()};
  std::vector<int> n_values{0, 1, 2, 3};
  std::size_t token_limit = 480;
  bool ablate_graph = false;
  bool ablate_context = false;
  Split split = Split::Test;
  OutputMode mode = OutputMode::Extended;
  TimelineMode timeline = TimelineMode::Triples;
  GleuOptions gleu;
  unsigned jobs = 1;
  DialogBounds bounds;
};

inline std::map<std::string, Dialog> dialog_index(const std::vector<Dialog>& dialogs) {
  std::map<std::string, Dialog> idx;
  for (const Dialog& d : dialogs) {
    if (!idx.emplace(d.id, d).second)
      throw ValidationError("duplicate dialog id '" + d.id + "'");
  }
  return idx;
}

// ---- augment ----

struct AugmentStats {
  std::size_t instances = 0;
  std::size_t skipped_slots = 0;
};

// Build all evaluation instances for the configured grid. Graphs are
// shared per (dialog, n) across context types and prefixes; per-dialog
// RNG streams keep the output independent of processing order.
inline std::vector<EvalInstance> build_instances(const KnowledgeBase& kb,
                                                 const std::vector<Dialog>& dialogs,
                                                 const RunConfig& cfg,
                                                 AugmentStats* stats = nullptr) {
  std::vector<std::vector<EvalInstance>> per_dialog(dialogs.size());
  std::vector<std::size_t> skipped(dialogs.size(), 0);
  parallel_for(dialogs.size(), cfg.jobs, [&](std::size_t di) {
    const Dialog& d = dialogs[di];
    std::vector<std::size_t> prefixes = subsample_prefixes(d, cfg.split, cfg.seed);
    for (int n : cfg.n_values) {
      Rng rng = derive_rng(cfg.seed, "augment", d.id);
      AugmentedGraph g = build_kplus(kb, d, n, rng);
      skipped[di] += g.skipped_slots;
      for (ContextType ct : cfg.context_types) {
        for (std::size_t p : prefixes) {
          EvalInstance inst;
          inst.dialog_id = d.id;
          inst.prefix.assign(d.turns.begin(), d.turns.begin() + static_cast<long>(p));
          inst.context_type = ct;
          inst.graph = g;
          inst.root_entity = d.root_entity;
          inst.category = d.category;
          inst.target = d.turns[p];
          per_dialog[di].push_back(std::move(inst));
        }
      }
    }
  });
  std::vector<EvalInstance> out;
  for (std::size_t di = 0; di < dialogs.size(); ++di) {
    for (auto& inst : per_dialog[di]) out.push_back(std::move(inst));
    if (stats) stats->skipped_slots += skipped[di];
  }
  if (stats) stats->instances = out.size();
  return out;
}

inline void write_instances(const std::vector<EvalInstance>& instances,
                            const std::filesystem::path& path) {
  JsonlWriter w(path);
  for (const EvalInstance& inst : instances) w.write(instance_to_record(inst));
  w.close();
}

// ---- build-inputs ----

struct BuildInputsStats {
  std::size_t kept = 0;
  std::size_t dropped = 0;
};

inline BuildInputsStats write_model_inputs(std::vector<EvalInstance> instances,
                                           const RunConfig& cfg,
                                           const std::filesystem::path& out_path) {
  for (EvalInstance& inst : instances) {
    inst.ablate_graph = cfg.ablate_graph;
    inst.ablate_context = cfg.ablate_context;
  }
  FilterResult filtered = filter_overlong(std::move(instances), cfg.token_limit);
  JsonlWriter w(out_path);
  for (const EvalInstance& inst : filtered.kept) {
    w.write({{"id", inst.id()},
             {"input", build_input(inst)},
             {"reference", reference_output(inst, cfg.mode == OutputMode::QuestionOnly)}});
  }
  w.close();
  return {filtered.kept.size(), filtered.dropped};
}

// ---- joined evaluation input ----

struct JoinedPrediction {
  const EvalInstance* instance;
  const PredictionRecord* prediction;
};

// Pair predictions with their instances, sorted by instance id so every
// downstream file is in deterministic order whatever the worker count.
inline std::vector<JoinedPrediction> join_predictions(
    const std::vector<EvalInstance>& instances, const std::vector<PredictionRecord>& preds) {
  std::map<std::string, const EvalInstance*> by_id;
  for (const EvalInstance& inst : instances) by_id[inst.id()] = &inst;
  std::vector<JoinedPrediction> out;
  out.reserve(preds.size());
  for (const PredictionRecord& p : preds) {
    auto it = by_id.find(p.instance_id);
    if (it == by_id.end())
      throw ValidationError("prediction for unknown instance '" + p.instance_id + "'");
    out.push_back({it->second, &p});
  }
  std::sort(out.begin(), out.end(), [](const JoinedPrediction& a, const JoinedPrediction& b) {
    return a.instance->id() < b.instance->id();
  });
  return out;
}

// ---- eval-triples ----

inline std::vector<TripleVerdict> eval_triples(const std::vector<JoinedPrediction>& joined,
                                               const KnowledgeBase& kb, const RunConfig& cfg) {
  std::vector<TripleVerdict> out(joined.size());
  parallel_for(joined.size(), cfg.jobs, [&](std::size_t i) {
    ParsedOutput parsed;
    try {
      parsed = parse_output(joined[i].prediction->raw_output, cfg.mode);
    } catch (const EmptyOutput&) {
      parsed.mode = cfg.mode;  // blank output: ill-formed, no question
    }
    out[i] = classify_triple(parsed, *joined[i].instance, kb);
  });
  return out;
}

// ---- eval-questions ----

inline std::vector<QuestionScoreRecord> eval_questions(
    const std::vector<JoinedPrediction>& joined, const KnowledgeBase& kb,
    const RunConfig& cfg) {
  std::vector<QuestionScoreRecord> out(joined.size());
  parallel_for(joined.size(), cfg.jobs, [&](std::size_t i) {
    const EvalInstance& inst = *joined[i].instance;
    QuestionScoreRecord rec;
    rec.instance_id = inst.id();
    ParsedOutput parsed;
    try {
      parsed = parse_output(joined[i].prediction->raw_output, cfg.mode);
    } catch (const EmptyOutput&) {
      rec.skip_reason = "empty_output";
      out[i] = std::move(rec);
      return;
    }
    if (cfg.mode == OutputMode::Extended) {
      ScoredGleu tq = score_triple_question(parsed, kb, cfg.gleu);
      if (tq.score) rec.tq_gleu = tq.score->value;
      else if (tq.skip) rec.skip_reason = std::string(to_string(*tq.skip));
    }
    ScoredGleu quality = score_question_quality(parsed.question, inst, kb, cfg.gleu);
    if (quality.score) rec.quality_gleu = quality.score->value;
    else if (quality.skip && !rec.skip_reason)
      rec.skip_reason = std::string(to_string(*quality.skip));
    out[i] = std::move(rec);
  });
  return out;
}

// ---- eval-pronouns ----

inline std::vector<PronounRecord> eval_pronouns(const std::vector<JoinedPrediction>& joined,
                                                const KnowledgeBase& kb, const RunConfig& cfg) {
  std::vector<std::vector<PronounRecord>> per_instance(joined.size());
  parallel_for(joined.size(), cfg.jobs, [&](std::size_t i) {
    const EvalInstance& inst = *joined[i].instance;
    ParsedOutput parsed;
    try {
      parsed = parse_output(joined[i].prediction->raw_output, cfg.mode);
    } catch (const EmptyOutput&) {
      return;
    }
    std::vector<std::string> pronouns = detect_pronouns(parsed.question);
    if (pronouns.empty()) return;
    MentionTimeline timeline = build_timeline(inst.prefix, kb, cfg.timeline);
    for (const std::string& p : pronouns) {
      PronounRecord rec;
      rec.instance_id = inst.id();
      rec.pronoun = p;
      if (parsed.wellformed_triple && parsed.predicted_triple) {
        rec.judged = true;
        rec.verdict = judge_pronoun(p, parsed, timeline, kb);
        rec.triple_key = parsed.predicted_triple->key();
      }
      per_instance[i].push_back(std::move(rec));
    }
  });
  std::vector<PronounRecord> out;
  for (auto& recs : per_instance)
    for (auto& r : recs) out.push_back(std::move(r));
  return out;
}

}  // namespace kgqg
