// kgqg — reference-less evaluation pipeline for knowledge-grounded
// conversational question generation. Subcommands cover the whole flow:
// augment → build-inputs → oracle → eval-* → report, plus agreement
// statistics for human annotations.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgqg/pipeline.hpp"

namespace fs = std::filesystem;
using namespace kgqg;

namespace {

struct CliOptions {
  std::string kb_path;
  std::string entities_path;
  std::string verbalizations_path;
  std::string dialogs_path;
  std::string instances_path;
  std::string predictions_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::vector<std::string> context_types;
  std::vector<int> n_values;
  std::size_t token_limit = 480;
  std::string ablate = "none";
  std::string mode = "extended";
  std::string split = "test";
  std::string policy = "perfect";
  std::string timeline = "triples";
  unsigned jobs = 1;
  bool enforce_bounds = false;
  bool gleu_no_punct_split = false;
  int gleu_max_order = 4;
};

RunConfig make_run_config(const CliOptions& o) {
  RunConfig cfg;
  cfg.seed = o.seed;
  cfg.token_limit = o.token_limit;
  cfg.jobs = o.jobs < 1 ? 1 : o.jobs;
  cfg.bounds.enforce = o.enforce_bounds;
  cfg.gleu.max_order = o.gleu_max_order;
  cfg.gleu.split_punct = !o.gleu_no_punct_split;
  if (!o.context_types.empty()) {
    cfg.context_types.clear();
    for (const std::string& s : o.context_types) {
      auto ct = parse_context_type(s);
      if (!ct) throw ValidationError("unknown context type '" + s + "'");
      cfg.context_types.push_back(*ct);
    }
  }
  if (!o.n_values.empty()) {
    cfg.n_values = o.n_values;
    for (int n : cfg.n_values)
      if (n < 0) throw ValidationError("--n values must be >= 0");
  }
  if (o.ablate == "graph") cfg.ablate_graph = true;
  else if (o.ablate == "context") cfg.ablate_context = true;
  else if (o.ablate != "none") throw ValidationError("--ablate must be none|graph|context");
  auto mode = parse_output_mode(o.mode);
  if (!mode) throw ValidationError("--mode must be extended|question-only");
  cfg.mode = *mode;
  auto split = parse_split(o.split);
  if (!split) throw ValidationError("--split must be train|val|test");
  cfg.split = *split;
  if (o.timeline == "questions-only") cfg.timeline = TimelineMode::QuestionsOnly;
  else if (o.timeline != "triples")
    throw ValidationError("--timeline must be triples|questions-only");
  return cfg;
}

KnowledgeBase load_kb_opts(const CliOptions& o) {
  if (o.kb_path.empty()) throw ValidationError("--kb is required");
  if (fs::is_directory(o.kb_path)) return load_kb_dir(o.kb_path);
  return load_kb(o.kb_path, o.entities_path.empty() ? fs::path{} : fs::path(o.entities_path),
                 o.verbalizations_path.empty() ? fs::path{} : fs::path(o.verbalizations_path));
}

std::vector<Dialog> load_dialogs_opts(const CliOptions& o, const RunConfig& cfg) {
  if (o.dialogs_path.empty()) throw ValidationError("--dialogs is required");
  std::size_t warnings = 0;
  std::vector<Dialog> dialogs = load_dialogs(o.dialogs_path, cfg.bounds, &warnings);
  if (warnings > 0)
    std::cerr << "warning: " << warnings << " dialog(s) outside the length bounds\n";
  return dialogs;
}

std::vector<EvalInstance> load_instances_opts(const CliOptions& o,
                                              const std::vector<Dialog>& dialogs) {
  if (o.instances_path.empty()) throw ValidationError("--instances is required");
  return load_instances(o.instances_path, dialog_index(dialogs));
}

std::vector<JoinedPrediction> join_opts(const CliOptions& o,
                                        const std::vector<EvalInstance>& instances,
                                        std::vector<PredictionRecord>& preds) {
  if (o.predictions_path.empty()) throw ValidationError("--predictions is required");
  preds = load_predictions(o.predictions_path);
  return join_predictions(instances, preds);
}

void require_out(const CliOptions& o) {
  if (o.out_path.empty()) throw ValidationError("--out is required");
}

// label=path pairs for the report command; bare paths get label "none".
std::pair<std::string, std::string> split_labeled(const std::string& arg) {
  auto eq = arg.find('=');
  if (eq == std::string::npos) return {"none", arg};
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

int cmd_augment(const CliOptions& o) {
  RunConfig cfg = make_run_config(o);
  require_out(o);
  KnowledgeBase kb = load_kb_opts(o);
  std::vector<Dialog> dialogs = load_dialogs_opts(o, cfg);
  AugmentStats stats;
  std::vector<EvalInstance> instances = build_instances(kb, dialogs, cfg, &stats);
  write_instances(instances, o.out_path);
  std::cout << instances.size() << " instances written to " << o.out_path << " ("
            << stats.skipped_slots << " empty distractor slots)\n";
  return 0;
}

int cmd_build_inputs(const CliOptions& o) {
  RunConfig cfg = make_run_config(o);
  require_out(o);
  std::vector<Dialog> dialogs = load_dialogs_opts(o, cfg);
  std::vector<EvalInstance> instances = load_instances_opts(o, dialogs);
  BuildInputsStats stats = write_model_inputs(std::move(instances), cfg, o.out_path);
  const std::size_t total = stats.kept + stats.dropped;
  std::cout << stats.kept << " inputs written, " << stats.dropped << " dropped over "
            << cfg.token_limit << " tokens";
  if (total > 0) std::cout << " (" << percent(stats.dropped, total) << "%)";
  std::cout << '\n';
  return 0;
}

int cmd_oracle(const CliOptions& o) {
  RunConfig cfg = make_run_config(o);
  require_out(o);
  KnowledgeBase kb = load_kb_opts(o);
  std::vector<Dialog> dialogs = load_dialogs_opts(o, cfg);
  std::vector<EvalInstance> instances = load_instances_opts(o, dialogs);
  auto policy = parse_oracle_policy(o.policy);
  if (!policy)
    throw ValidationError("--policy must be perfect|repeater|hallucinator|question-only-perfect");
  std::vector<PredictionRecord> preds = run_oracle(instances, *policy, kb, cfg.seed);
  write_predictions(preds, o.out_path);
  std::cout << preds.size() << " predictions written to " << o.out_path << '\n';
  return 0;
}

int cmd_eval_triples(const CliOptions& o) {
  RunConfig cfg = make_run_config(o);
  require_out(o);
  KnowledgeBase kb = load_kb_opts(o);
  std::vector<Dialog> dialogs = load_dialogs_opts(o, cfg);
  std::vector<EvalInstance> instances = load_instances_opts(o, dialogs);
  std::vector<PredictionRecord> preds;
  auto joined = join_opts(o, instances, preds);
  std::vector<TripleVerdict> verdicts = eval_triples(joined, kb, cfg);
  JsonlWriter w(o.out_path);
  for (const TripleVerdict& v : verdicts) w.write(verdict_to_record(v));
  w.close();
  std::cout << verdicts.size() << " verdicts written to " << o.out_path << '\n';
  return 0;
}

int cmd_eval_questions(const CliOptions& o) {
  RunConfig cfg = make_run_config(o);
  require_out(o);
  KnowledgeBase kb = load_kb_opts(o);
  std::vector<Dialog> dialogs = load_dialogs_opts(o, cfg);
  std::vector<EvalInstance> instances = load_instances_opts(o, dialogs);
  std::vector<PredictionRecord> preds;
  auto joined = join_opts(o, instances, preds);
  std::vector<QuestionScoreRecord> scores = eval_questions(joined, kb, cfg);
  JsonlWriter w(o.out_path);
  for (const QuestionScoreRecord& s : scores) w.write(score_to_record(s));
  w.close();
  std::cout << scores.size() << " score records written to " << o.out_path << '\n';
  return 0;
}

int cmd_eval_pronouns(const CliOptions& o) {
  RunConfig cfg = make_run_config(o);
  require_out(o);
  KnowledgeBase kb = load_kb_opts(o);
  std::vector<Dialog> dialogs = load_dialogs_opts(o, cfg);
  std::vector<EvalInstance> instances = load_instances_opts(o, dialogs);
  std::vector<PredictionRecord> preds;
  auto joined = join_opts(o, instances, preds);
  std::vector<PronounRecord> records = eval_pronouns(joined, kb, cfg);
  JsonlWriter w(o.out_path);
  for (const PronounRecord& r : records) w.write(pronoun_to_record(r));
  w.close();
  std::cout << records.size() << " pronoun records written to " << o.out_path << '\n';
  return 0;
}

int cmd_agreement(const std::vector<std::string>& annotation_args, const CliOptions& o) {
  require_out(o);
  if (annotation_args.empty()) throw ValidationError("--annotations is required");
  json out = json::array();
  for (const std::string& arg : annotation_args) {
    auto [tag, path] = split_labeled(arg);
    std::vector<AnnotationRecord> records = load_annotations(path);
    for (const CriterionAgreement& ca : agreement_summary(records, tag)) {
      out.push_back({{"criterion", ca.criterion},
                     {"tag", ca.tag},
                     {"kappa", ca.mean.kappa ? json(*ca.mean.kappa) : json(nullptr)},
                     {"observed", ca.mean.observed},
                     {"pairs", ca.per_pair.size()},
                     {"items", ca.mean.n_items},
                     {"ties", ca.tie_items},
                     {"majority", ca.majority}});
    }
  }
  std::ofstream f(o.out_path);
  if (!f) throw IoError("cannot open " + o.out_path);
  f << out.dump(2) << '\n';
  if (!f) throw IoError("write failed: " + o.out_path);
  std::cout << "agreement written to " << o.out_path << '\n';
  return 0;
}

int cmd_report(const std::vector<std::string>& verdict_args,
               const std::vector<std::string>& score_args,
               const std::vector<std::string>& pronoun_args, const std::string& agreement_path,
               const CliOptions& o) {
  require_out(o);
  std::map<std::string, ConditionData> conditions;
  for (const std::string& arg : verdict_args) {
    auto [label, path] = split_labeled(arg);
    conditions[label].label = label;
    conditions[label].verdicts = load_verdicts(path);
  }
  for (const std::string& arg : score_args) {
    auto [label, path] = split_labeled(arg);
    conditions[label].label = label;
    conditions[label].scores = load_scores(path);
  }
  for (const std::string& arg : pronoun_args) {
    auto [label, path] = split_labeled(arg);
    conditions[label].label = label;
    conditions[label].pronouns = load_pronoun_records(path);
  }
  if (conditions.empty()) throw ValidationError("report needs at least one input file");
  fs::path out_dir(o.out_path);
  fs::create_directories(out_dir);
  ReportWriter writer(out_dir / "report.tsv", out_dir / "report.json");
  for (const auto& [label, cond] : conditions) writer.add_condition(cond);
  if (!agreement_path.empty()) {
    std::ifstream f(agreement_path);
    if (!f) throw IoError("cannot open " + agreement_path);
    json rows = json::parse(f);
    std::vector<CriterionAgreement> cas;
    for (const auto& r : rows) {
      CriterionAgreement ca;
      ca.criterion = r.value("criterion", "");
      ca.tag = r.value("tag", "");
      if (r.contains("kappa") && r["kappa"].is_number()) ca.mean.kappa = r["kappa"].get<double>();
      ca.mean.observed = r.value("observed", 0.0);
      ca.mean.n_items = r.value("items", 0u);
      ca.per_pair.resize(r.value("pairs", 0u));
      ca.tie_items = r.value("ties", 0u);
      if (r.contains("majority") && r["majority"].is_object())
        for (auto& [k, v] : r["majority"].items())
          ca.majority[k] = v.get<std::size_t>();
      cas.push_back(std::move(ca));
    }
    writer.add_agreement(cas);
  }
  // Two-condition significance: Welch test on pooled quality GLEU.
  std::vector<std::pair<std::string, std::vector<double>>> pools;
  for (const auto& [label, cond] : conditions) {
    if (cond.scores.empty()) continue;
    QuestionReport qr = aggregate_question_report(cond.scores);
    pools.emplace_back(label, qr.quality_values);
  }
  for (std::size_t i = 0; i < pools.size(); ++i)
    for (std::size_t j = i + 1; j < pools.size(); ++j) {
      const auto& [la, va] = pools[i];
      const auto& [lb, vb] = pools[j];
      if (va.size() < 2 || vb.size() < 2) continue;
      double ma = 0, mb = 0;
      for (double v : va) ma += v;
      for (double v : vb) mb += v;
      ma /= static_cast<double>(va.size());
      mb /= static_cast<double>(vb.size());
      try {
        writer.add_significance(la, lb, welch_t_test(va, vb), ma, mb);
      } catch (const DegenerateSample&) {
        // both pools constant; nothing to test
      }
    }
  writer.finish();
  std::cout << "report written to " << (out_dir / "report.tsv").string() << " and "
            << (out_dir / "report.json").string() << '\n';
  return 0;
}

void add_common_options(CLI::App* cmd, CliOptions& o, bool with_kb = true,
                        bool with_dialogs = true) {
  cmd->fallthrough();  // app-level flags like --config work after the subcommand
  if (with_kb) {
    cmd->add_option("--kb", o.kb_path, "KB triples file (or directory with kb.jsonl)");
    cmd->add_option("--entities", o.entities_path, "entity metadata JSONL");
    cmd->add_option("--verbalizations", o.verbalizations_path, "triple verbalizations JSONL");
  }
  if (with_dialogs) {
    cmd->add_option("--dialogs", o.dialogs_path, "dialog JSONL");
    cmd->add_flag("--enforce-length-bounds", o.enforce_bounds,
                  "reject dialogs outside the turn-count bounds");
  }
  cmd->add_option("--out", o.out_path, "output path");
  cmd->add_option("--seed", o.seed, "RNG seed")->envname("KGQG_SEED");
  cmd->add_option("--jobs", o.jobs, "worker threads (output is order-stable)");
  cmd->add_option("--mode", o.mode, "extended|question-only");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reference-less evaluation for knowledge-grounded question generation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags override");

  CliOptions o;
  std::vector<std::string> annotation_args, verdict_args, score_args, pronoun_args;
  std::string agreement_path;

  CLI::App* augment = app.add_subcommand("augment", "build evaluation instances with K+n graphs");
  add_common_options(augment, o);
  augment->add_option("--n", o.n_values, "distractors per type (repeatable)");
  augment->add_option("--context-type", o.context_types, "context types (repeatable)");
  augment->add_option("--split", o.split, "train|val|test (context subsampling)");

  CLI::App* build = app.add_subcommand("build-inputs", "serialize model inputs");
  add_common_options(build, o, false);
  build->add_option("--instances", o.instances_path, "instance JSONL from augment");
  build->add_option("--token-limit", o.token_limit, "drop inputs above this token count");
  build->add_option("--ablate", o.ablate, "none|graph|context");

  CLI::App* oracle = app.add_subcommand("oracle", "run a deterministic oracle model");
  add_common_options(oracle, o);
  oracle->add_option("--instances", o.instances_path, "instance JSONL from augment");
  oracle->add_option("--policy", o.policy,
                     "perfect|repeater|hallucinator|question-only-perfect");

  CLI::App* evtr = app.add_subcommand("eval-triples", "classify predicted triples");
  add_common_options(evtr, o);
  evtr->add_option("--instances", o.instances_path, "instance JSONL from augment");
  evtr->add_option("--predictions", o.predictions_path, "prediction JSONL");

  CLI::App* evq = app.add_subcommand("eval-questions", "GLEU-score generated questions");
  add_common_options(evq, o);
  evq->add_option("--instances", o.instances_path, "instance JSONL from augment");
  evq->add_option("--predictions", o.predictions_path, "prediction JSONL");
  evq->add_flag("--gleu-no-punct-split", o.gleu_no_punct_split,
                "tokenize on whitespace only");
  evq->add_option("--gleu-max-order", o.gleu_max_order, "max n-gram order (default 4)");

  CLI::App* evp = app.add_subcommand("eval-pronouns", "judge pronoun gender and ambiguity");
  add_common_options(evp, o);
  evp->add_option("--instances", o.instances_path, "instance JSONL from augment");
  evp->add_option("--predictions", o.predictions_path, "prediction JSONL");
  evp->add_option("--timeline", o.timeline, "triples|questions-only");

  CLI::App* agr = app.add_subcommand("agreement", "inter-annotator agreement statistics");
  agr->fallthrough();
  agr->add_option("--annotations", annotation_args,
                  "annotation JSONL, optionally tag=path (repeatable)");
  agr->add_option("--out", o.out_path, "output JSON path");

  CLI::App* rep = app.add_subcommand("report", "compose verdicts into the unified report");
  rep->fallthrough();
  rep->add_option("--verdicts", verdict_args, "triple verdict JSONL, optionally label=path");
  rep->add_option("--question-scores", score_args, "question score JSONL, optionally label=path");
  rep->add_option("--pronoun-verdicts", pronoun_args, "pronoun JSONL, optionally label=path");
  rep->add_option("--agreement", agreement_path, "agreement JSON from the agreement command");
  rep->add_option("--out", o.out_path, "output directory for report.tsv/report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // bad flags are validation failures; --help and --version stay 0
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (augment->parsed()) return cmd_augment(o);
    if (build->parsed()) return cmd_build_inputs(o);
    if (oracle->parsed()) return cmd_oracle(o);
    if (evtr->parsed()) return cmd_eval_triples(o);
    if (evq->parsed()) return cmd_eval_questions(o);
    if (evp->parsed()) return cmd_eval_pronouns(o);
    if (agr->parsed()) return cmd_agreement(annotation_args, o);
    if (rep->parsed())
      return cmd_report(verdict_args, score_args, pronoun_args, agreement_path, o);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
