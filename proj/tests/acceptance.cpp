// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any fails. Tolerances are pinned in code. When the KGQG_BIN environment
// variable points at the CLI binary, the determinism criterion runs the
// real executable end to end; otherwise it runs the same stages through
// the library.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "kgqg/pipeline.hpp"

using namespace kgqg;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define ACCEPT(cond)                                                              \
  do {                                                                            \
    if (!(cond))                                                                  \
      throw CheckFailure(std::string(#cond) + " (line " + std::to_string(__LINE__) + ")"); \
  } while (0)

#define ACCEPT_MSG(cond, msg)                                                      \
  do {                                                                             \
    if (!(cond)) {                                                                 \
      std::ostringstream os_;                                                      \
      os_ << #cond << " (line " << __LINE__ << "): " << msg;                       \
      throw CheckFailure(os_.str());                                               \
    }                                                                              \
  } while (0)

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  ACCEPT_MSG(f.good(), "cannot open " << p);
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

double elapsed_s(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

// --- criterion 1: distractor cap law -------------------------------------

void criterion_distractor_cap() {
  const auto t0 = std::chrono::steady_clock::now();
  fixtures::Corpus corpus = fixtures::rich_corpus(4242, 1000);
  ACCEPT(corpus.dialogs.size() == 1000);
  for (const Dialog& d : corpus.dialogs) {
    const std::size_t kd = d.base_graph().size();
    for (int n = 0; n <= 3; ++n) {
      Rng rng = derive_rng(17, "augment", d.id);
      AugmentedGraph g = build_kplus(corpus.kb, d, n, rng);
      ACCEPT(g.distractors.size() <= kd);
      ACCEPT_MSG(g.skipped_slots == 0,
                 "sampler starved on " << d.id << " n=" << n << " (fixture must be rich)");
      const std::size_t expect = std::min<std::size_t>(3 * static_cast<std::size_t>(n), kd);
      ACCEPT_MSG(g.distractors.size() == expect,
                 d.id << " n=" << n << ": got " << g.distractors.size() << ", want " << expect);
      if (n == 0) {
        ACCEPT(g.distractors.empty());
        ACCEPT(g.order.size() == kd);
        TripleKeySet base = key_set(g.base), kd_keys = key_set(d.base_graph());
        ACCEPT(base == kd_keys);
      }
    }
  }
  // the cap still holds when samplers starve
  fixtures::Corpus sparse = fixtures::sparse_corpus(5);
  for (int n = 0; n <= 3; ++n) {
    Rng rng = derive_rng(17, "augment", sparse.dialogs[0].id);
    AugmentedGraph g = build_kplus(sparse.kb, sparse.dialogs[0], n, rng);
    ACCEPT(g.distractors.size() <= g.base.size());
  }
  const double secs = elapsed_s(t0);
  ACCEPT_MSG(secs < 5.0, "took " << secs << "s, budget 5s");
}

// --- criterion 2: serialization fidelity ----------------------------------

void criterion_serialization() {
  fixtures::Corpus corpus = fixtures::rich_corpus(311, 25);
  for (const Triple& t : corpus.kb.triples()) {
    auto back = parse_triple(serialize_triple(t));
    ACCEPT(back.has_value() && *back == t);
  }
  for (const Dialog& d : corpus.dialogs) {
    for (std::size_t plen = 0; plen <= d.turns.size(); ++plen) {
      std::span<const Turn> prefix(d.turns.data(), plen);
      for (ContextType ct : all_context_types) {
        auto turns = parse_context(serialize_context(prefix, ct), ct);
        ACCEPT(turns.has_value() && turns->size() == plen);
        for (std::size_t i = 0; i < plen; ++i) {
          if (ct == ContextType::KL || ct == ContextType::QA_NL_KL)
            ACCEPT((*turns)[i].triple && *(*turns)[i].triple == prefix[i].triple);
          if (ct != ContextType::KL) ACCEPT((*turns)[i].question == prefix[i].question);
        }
      }
    }
    for (const Turn& turn : d.turns) {
      std::string raw =
          "[TRIPLE] " + serialize_triple(turn.triple) + " [QUESTION] " + turn.question;
      ParsedOutput p = parse_output(raw, OutputMode::Extended);
      ACCEPT(p.wellformed_triple);
      ACCEPT(p.predicted_triple && *p.predicted_triple == turn.triple);
      ACCEPT(p.question == turn.question);
    }
  }
  // the worked-example instance, byte for byte (with `</t>` normalized)
  Dialog d = fixtures::example_dialog();
  std::span<const Turn> prefix(d.turns.data(), 2);
  ACCEPT(serialize_triple(Triple::make("Afghanistan", "lowest point", "Amu Darya")) ==
         "<t> <sj> Afghanistan <p> lowest point <o> Amu Darya </t>");
  ACCEPT(serialize_context(prefix, ContextType::QA_NL) ==
         "<q> What was the field of work of Sitara Achakzai? <a> feminism "
         "<q> What was the cause of death of Achakzai? <a> homicide");
  ACCEPT(serialize_context(prefix, ContextType::Q_NL) ==
         "<q> What was the field of work of Sitara Achakzai? "
         "<q> What was the cause of death of Achakzai?");
  ACCEPT(serialize_context(prefix, ContextType::KL) ==
         "<t> <sj> Sitara Achakzai <p> field of work <o> feminism </t> "
         "<t> <sj> Sitara Achakzai <p> death manner <o> murder </t>");
  ACCEPT(serialize_context(prefix, ContextType::QA_NL_KL) ==
         "<t> <sj> Sitara Achakzai <p> field of work <o> feminism </t> "
         "<q> What was the field of work of Sitara Achakzai? <a> feminism "
         "<t> <sj> Sitara Achakzai <p> death manner <o> murder </t> "
         "<q> What was the cause of death of Achakzai? <a> homicide");
  EvalInstance inst = fixtures::example_instance(ContextType::QA_NL);
  ACCEPT(build_input(inst) ==
         "[E] Sitara Achakzai [TYPE] person [LEN] 5 "
         "[KB] <t> <sj> Afghanistan <p> lowest point <o> Amu Darya </t> "
         "<t> <sj> Sitara Achakzai <p> birthplace <o> Afghanistan </t> "
         "<t> <sj> Sitara Achakzai <p> field of work <o> feminism </t> "
         "<t> <sj> Sitara Achakzai <p> death manner <o> murder </t> "
         "<t> <sj> Afghanistan <p> capital <o> Kabul </t> "
         "[CTX] <q> What was the field of work of Sitara Achakzai? <a> feminism "
         "<q> What was the cause of death of Achakzai? <a> homicide");
  ParsedOutput ref = parse_output(
      "[TRIPLE] <t> <sj> Sitara Achakzai <p> birthplace <o> Afghanistan </t> "
      "[QUESTION] Where was she born ?",
      OutputMode::Extended);
  ACCEPT(ref.wellformed_triple);
  ACCEPT(ref.predicted_triple ==
         Triple::make("Sitara Achakzai", "birthplace", "Afghanistan"));
  ACCEPT(ref.question == "Where was she born ?");
}

// --- criterion 3: GLEU unit law -------------------------------------------

void criterion_gleu() {
  GleuScore s = gleu("the cat", "the cat sat");
  ACCEPT(std::abs(s.value - 0.6) < 1e-15);
  ACCEPT(s.matched_ngrams == 3 && s.hyp_ngrams == 3 && s.ref_ngrams == 5);
  ACCEPT(gleu("same words", "same words").value == 1.0);
  ACCEPT(gleu("alpha beta", "gamma delta").value == 0.0);
  Rng rng(31337);
  for (int i = 0; i < 500; ++i) {
    std::string h = fixtures::random_sentence(rng);
    std::string r = fixtures::random_sentence(rng);
    double got = gleu(h, r).value;
    double want = fixtures::bf_gleu(h, r);
    ACCEPT_MSG(std::abs(got - want) < 1e-12,
               "gleu('" << h << "','" << r << "') = " << got << ", brute force " << want);
  }
}

// --- criterion 4: oracle end-to-end ----------------------------------------

void criterion_oracle_end_to_end() {
  fixtures::Corpus corpus = fixtures::rich_corpus(777, 45);
  RunConfig cfg;
  cfg.seed = 23;
  cfg.n_values = {0, 1};
  cfg.context_types = {ContextType::QA_NL, ContextType::KL};
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<EvalInstance> instances = build_instances(corpus.kb, corpus.dialogs, cfg);
  ACCEPT_MSG(instances.size() >= 1000, "only " << instances.size() << " instances");

  // PerfectVerbalizer
  auto perfect = run_oracle(instances, OraclePolicy::PerfectVerbalizer, corpus.kb, cfg.seed);
  auto joined = join_predictions(instances, perfect);
  auto verdicts = eval_triples(joined, corpus.kb, cfg);
  std::size_t exact = 0;
  for (const auto& v : verdicts)
    if (v.primary == TripleLabel::ExactMatch) ++exact;
  ACCEPT_MSG(exact == verdicts.size(),
             exact << "/" << verdicts.size() << " exact matches");
  auto scores = eval_questions(joined, corpus.kb, cfg);
  double sum = 0;
  std::size_t n = 0;
  for (const auto& s : scores) {
    ACCEPT(s.quality_gleu.has_value());
    sum += *s.quality_gleu;
    ++n;
    ACCEPT(s.tq_gleu.has_value() && *s.tq_gleu == 1.0);
  }
  ACCEPT(n > 0 && sum / static_cast<double>(n) == 1.0);
  auto pronouns = eval_pronouns(joined, corpus.kb, cfg);
  std::size_t mistakes = 0, judged = 0;
  for (const auto& r : pronouns)
    if (r.judged && r.verdict) {
      ++judged;
      if (!r.verdict->gender_correct) ++mistakes;
    }
  ACCEPT_MSG(judged > 0, "fixture produced no pronominalized questions");
  ACCEPT_MSG(mistakes == 0, mistakes << " gender mistakes from the perfect oracle");

  // Repeater: repetitions on all non-empty prefixes
  auto repeater = run_oracle(instances, OraclePolicy::Repeater, corpus.kb, cfg.seed);
  auto joined_r = join_predictions(instances, repeater);
  auto verdicts_r = eval_triples(joined_r, corpus.kb, cfg);
  std::map<std::string, const EvalInstance*> by_id;
  for (const auto& inst : instances) by_id[inst.id()] = &inst;
  std::size_t rep_total = 0, rep_hit = 0;
  for (const auto& v : verdicts_r) {
    if (by_id.at(v.instance_id)->prefix.empty()) continue;
    ++rep_total;
    if (v.primary == TripleLabel::Repetition) ++rep_hit;
  }
  ACCEPT_MSG(rep_total > 0 && rep_hit == rep_total,
             rep_hit << "/" << rep_total << " repetitions");

  // Hallucinator: everything well-formed is NotInKB
  auto halluc = run_oracle(instances, OraclePolicy::Hallucinator, corpus.kb, cfg.seed);
  auto joined_h = join_predictions(instances, halluc);
  auto verdicts_h = eval_triples(joined_h, corpus.kb, cfg);
  std::size_t wf = 0, not_in_kb = 0;
  for (const auto& v : verdicts_h) {
    if (v.all_labels.count(TripleLabel::IllFormed)) continue;
    ++wf;
    if (v.all_labels.count(TripleLabel::NotInKB)) ++not_in_kb;
  }
  ACCEPT_MSG(wf > 0 && not_in_kb == wf, not_in_kb << "/" << wf << " not-in-KB");

  const double secs = elapsed_s(t0);
  ACCEPT_MSG(secs < 10.0, "took " << secs << "s, budget 10s");
}

// --- criterion 5: taxonomy oracle equivalence ------------------------------

void criterion_taxonomy_equivalence() {
  for (std::uint64_t seed : {901u, 902u, 903u}) {
    fixtures::Corpus corpus = fixtures::rich_corpus(seed, 12);
    std::vector<std::pair<ParsedOutput, EvalInstance>> cases;
    Rng chooser(seed);
    for (const Dialog& d : corpus.dialogs) {
      Rng rng = derive_rng(seed, "augment", d.id);
      AugmentedGraph g = build_kplus(corpus.kb, d, 2, rng);
      for (std::size_t plen = 0; plen < d.turns.size() && cases.size() < 50; ++plen) {
        EvalInstance inst;
        inst.dialog_id = d.id;
        inst.prefix.assign(d.turns.begin(), d.turns.begin() + static_cast<long>(plen));
        inst.context_type = ContextType::QA_NL;
        inst.graph = g;
        inst.root_entity = d.root_entity;
        inst.category = d.category;
        inst.target = d.turns[plen];
        ParsedOutput probe;
        switch (chooser.below(6)) {
          case 0: probe = parse_output(extended_output(inst.target.triple, "Q?"),
                                       OutputMode::Extended); break;
          case 1:
            probe = parse_output(
                extended_output(plen > 0 ? inst.prefix.back().triple : g.base.back(), "Q?"),
                OutputMode::Extended);
            break;
          case 2:
            probe = parse_output(
                extended_output(g.distractors.empty()
                                    ? inst.target.triple
                                    : g.distractors[chooser.below(g.distractors.size())].first,
                                "Q?"),
                OutputMode::Extended);
            break;
          case 3:
            probe = parse_output(
                extended_output(
                    Triple::make(
                        corpus.kb.subject_vocab()[chooser.below(corpus.kb.subject_vocab().size())],
                        corpus.kb.property_vocab()[chooser.below(corpus.kb.property_vocab().size())],
                        corpus.kb.object_vocab()[chooser.below(corpus.kb.object_vocab().size())]),
                    "Q?"),
                OutputMode::Extended);
            break;
          case 4:
            probe = parse_output("[TRIPLE] <t> <sj> broken <o> tail </t> [QUESTION] Q?",
                                 OutputMode::Extended);
            break;
          default:
            probe = parse_output(
                extended_output(corpus.kb.triples()[chooser.below(corpus.kb.size())], "Q?"),
                OutputMode::Extended);
            break;
        }
        cases.emplace_back(std::move(probe), std::move(inst));
      }
    }
    ACCEPT(cases.size() == 50);
    std::size_t agree = 0;
    for (const auto& [probe, inst] : cases) {
      TripleVerdict got = classify_triple(probe, inst, corpus.kb);
      TripleVerdict want = fixtures::bf_classify(probe, inst, corpus.kb);
      if (got.primary == want.primary && got.all_labels == want.all_labels &&
          got.relevant == want.relevant)
        ++agree;
    }
    ACCEPT_MSG(agree == 50, agree << "/50 agreements at seed " << seed);
  }
}

// --- criterion 6: pronoun heuristics ---------------------------------------

void criterion_pronouns() {
  KnowledgeBase kb = fixtures::herschel_kb();
  Dialog d = fixtures::herschel_dialog();
  std::span<const Turn> prefix(d.turns.data(), 3);
  MentionTimeline tl = build_timeline(prefix, kb);
  ACCEPT(tl.last_of(Gender::Masculine) == std::optional<std::string>("Nevil Maskelyne"));
  ACCEPT(tl.last_of(Gender::Neutral) == std::optional<std::string>("Puppis"));
  ACCEPT(!tl.last_of(Gender::Feminine));
  ParsedOutput p = parse_output(
      "[TRIPLE] <t> <sj> William Herschel <p> place of burial <o> Westminster Abbey </t> "
      "[QUESTION] where was he buried?",
      OutputMode::Extended);
  auto pronouns = detect_pronouns(p.question);
  ACCEPT(pronouns.size() == 1 && pronouns[0] == "he");
  PronounVerdict v = judge_pronoun("he", p, tl, kb);
  ACCEPT(v.gender_correct);
  ACCEPT(v.ambiguous);
  ACCEPT(v.reason == AmbiguityReason::LastMentionMismatch);
  // empty context: always ambiguous
  MentionTimeline empty;
  for (const char* pron : {"he", "she", "it", "him", "her", "his", "hers", "its"}) {
    PronounVerdict ev = judge_pronoun(pron, p, empty, kb);
    ACCEPT(ev.ambiguous && ev.reason == AmbiguityReason::NullContext);
  }
}

// --- criterion 7: agreement statistics -------------------------------------

void criterion_agreement() {
  std::map<std::string, std::string> a, b;
  int item = 0;
  auto add = [&](const char* la, const char* lb, int count) {
    for (int i = 0; i < count; ++i) {
      std::string id = "i" + std::to_string(item++);
      a[id] = la;
      b[id] = lb;
    }
  };
  add("yes", "yes", 4);
  add("yes", "no", 1);
  add("no", "yes", 1);
  add("no", "no", 4);
  AgreementResult r = pairwise_agreement(a, b);
  ACCEPT(std::abs(r.observed - 0.8) < 1e-15);
  ACCEPT(r.kappa && std::abs(*r.kappa - 0.6) < 1e-12);
  // perfect agreement with mixed labels
  std::map<std::string, std::string> pa, pb;
  for (int i = 0; i < 10; ++i) {
    std::string id = "p" + std::to_string(i);
    pa[id] = pb[id] = i % 2 ? "yes" : "no";
  }
  AgreementResult pr = pairwise_agreement(pa, pb);
  ACCEPT(pr.observed == 1.0 && pr.kappa && std::abs(*pr.kappa - 1.0) < 1e-15);
  // Welch vs the frozen scipy oracle
  std::vector<double> sa = {1, 2, 3, 4, 5};
  std::vector<double> sb = {3, 4, 5, 6, 7};
  WelchResult w = welch_t_test(sa, sb);
  ACCEPT_MSG(std::abs(w.t - (-2.0)) < 1e-9, "t = " << w.t);
  ACCEPT_MSG(std::abs(w.p - 0.080516237957263) < 1e-6, "p = " << w.p);
}

// --- criterion 8: determinism across --jobs --------------------------------

void pipeline_once(const fixtures::Corpus& corpus, unsigned jobs, const fs::path& dir) {
  fs::create_directories(dir);
  RunConfig cfg;
  cfg.seed = 7;
  cfg.jobs = jobs;
  cfg.n_values = {0, 1, 2};
  std::vector<EvalInstance> instances = build_instances(corpus.kb, corpus.dialogs, cfg);
  write_instances(instances, dir / "instances.jsonl");
  auto preds = run_oracle(instances, OraclePolicy::Repeater, corpus.kb, cfg.seed);
  write_predictions(preds, dir / "predictions.jsonl");
  auto joined = join_predictions(instances, preds);
  auto verdicts = eval_triples(joined, corpus.kb, cfg);
  {
    JsonlWriter w(dir / "verdicts.jsonl");
    for (const auto& v : verdicts) w.write(verdict_to_record(v));
    w.close();
  }
  auto scores = eval_questions(joined, corpus.kb, cfg);
  {
    JsonlWriter w(dir / "scores.jsonl");
    for (const auto& s : scores) w.write(score_to_record(s));
    w.close();
  }
  auto pronouns = eval_pronouns(joined, corpus.kb, cfg);
  {
    JsonlWriter w(dir / "pronouns.jsonl");
    for (const auto& r : pronouns) w.write(pronoun_to_record(r));
    w.close();
  }
  ConditionData cond;
  cond.label = "none";
  cond.verdicts = verdicts;
  cond.scores = scores;
  cond.pronouns = pronouns;
  ReportWriter writer(dir / "report.tsv", dir / "report.json");
  writer.add_condition(cond);
  writer.finish();
}

int run_cli(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  ACCEPT_MSG(rc == 0, "command failed (" << rc << "): " << cmd);
  return rc;
}

void criterion_determinism() {
  fixtures::Corpus corpus = fixtures::rich_corpus(555, 12);
  fs::path root = fs::temp_directory_path() / "kgqg_acceptance_jobs";
  fs::remove_all(root);
  const char* bin = std::getenv("KGQG_BIN");
  if (bin && *bin) {
    fs::path data = root / "data";
    fs::create_directories(data);
    write_kb(corpus.kb, data / "kb");
    write_dialogs(corpus.dialogs, data / "dialogs.jsonl");
    for (unsigned jobs : {1u, 4u}) {
      fs::path dir = root / ("cli_j" + std::to_string(jobs));
      fs::create_directories(dir);
      const std::string base = std::string("\"") + bin + "\"";
      const std::string kb = " --kb \"" + (data / "kb").string() + "\"";
      const std::string dialogs = " --dialogs \"" + (data / "dialogs.jsonl").string() + "\"";
      const std::string jb = " --jobs " + std::to_string(jobs);
      const std::string quiet = " > /dev/null";
      run_cli(base + " augment" + kb + dialogs + " --seed 7 --n 0 --n 1 --n 2 --out \"" +
              (dir / "instances.jsonl").string() + "\"" + jb + quiet);
      run_cli(base + " oracle" + kb + dialogs + " --seed 7 --policy repeater --instances \"" +
              (dir / "instances.jsonl").string() + "\" --out \"" +
              (dir / "predictions.jsonl").string() + "\"" + jb + quiet);
      run_cli(base + " eval-triples" + kb + dialogs + " --instances \"" +
              (dir / "instances.jsonl").string() + "\" --predictions \"" +
              (dir / "predictions.jsonl").string() + "\" --out \"" +
              (dir / "verdicts.jsonl").string() + "\"" + jb + quiet);
      run_cli(base + " eval-questions" + kb + dialogs + " --instances \"" +
              (dir / "instances.jsonl").string() + "\" --predictions \"" +
              (dir / "predictions.jsonl").string() + "\" --out \"" +
              (dir / "scores.jsonl").string() + "\"" + jb + quiet);
      run_cli(base + " eval-pronouns" + kb + dialogs + " --instances \"" +
              (dir / "instances.jsonl").string() + "\" --predictions \"" +
              (dir / "predictions.jsonl").string() + "\" --out \"" +
              (dir / "pronouns.jsonl").string() + "\"" + jb + quiet);
      run_cli(base + " report --verdicts \"" + (dir / "verdicts.jsonl").string() +
              "\" --question-scores \"" + (dir / "scores.jsonl").string() +
              "\" --pronoun-verdicts \"" + (dir / "pronouns.jsonl").string() + "\" --out \"" +
              dir.string() + "\"" + quiet);
    }
    for (const char* name : {"instances.jsonl", "predictions.jsonl", "verdicts.jsonl",
                             "scores.jsonl", "pronouns.jsonl", "report.tsv", "report.json"}) {
      ACCEPT_MSG(slurp(root / "cli_j1" / name) == slurp(root / "cli_j4" / name),
                 name << " differs between --jobs 1 and --jobs 4");
    }
  } else {
    pipeline_once(corpus, 1, root / "lib_j1");
    pipeline_once(corpus, 4, root / "lib_j4");
    for (const char* name : {"instances.jsonl", "predictions.jsonl", "verdicts.jsonl",
                             "scores.jsonl", "pronouns.jsonl", "report.tsv", "report.json"}) {
      ACCEPT_MSG(slurp(root / "lib_j1" / name) == slurp(root / "lib_j4" / name),
                 name << " differs between jobs=1 and jobs=4");
    }
  }
}

// --- criterion 9: subsampling ----------------------------------------------

void criterion_subsampling() {
  fixtures::Corpus corpus = fixtures::rich_corpus(888, 200);
  ACCEPT(corpus.dialogs.size() == 200);
  for (const Dialog& d : corpus.dialogs) {
    const std::size_t P = d.turns.size();
    auto test = subsample_prefixes(d, Split::Test, 7);
    ACCEPT_MSG(test.size() == P, d.id << ": test kept " << test.size() << " of " << P);
    for (std::size_t i = 0; i < P; ++i) ACCEPT(test[i] == i);
    auto train = subsample_prefixes(d, Split::Train, 7);
    ACCEPT_MSG(train.size() == (P + 1) / 2,
               d.id << ": train kept " << train.size() << ", want " << (P + 1) / 2);
    std::set<std::size_t> uniq(train.begin(), train.end());
    ACCEPT(uniq.size() == train.size());
    for (std::size_t p : train) ACCEPT(p < P);
    auto val = subsample_prefixes(d, Split::Val, 7);
    ACCEPT(val.size() == (P + 1) / 2);
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"distractor-cap-law", criterion_distractor_cap},
      {"serialization-fidelity", criterion_serialization},
      {"gleu-unit-law", criterion_gleu},
      {"oracle-end-to-end", criterion_oracle_end_to_end},
      {"taxonomy-oracle-equivalence", criterion_taxonomy_equivalence},
      {"pronoun-heuristics", criterion_pronouns},
      {"agreement-statistics", criterion_agreement},
      {"determinism-across-jobs", criterion_determinism},
      {"subsampling", criterion_subsampling},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    try {
      fn();
      std::cout << "PASS " << name << '\n';
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "FAIL " << name << ": " << e.what() << '\n';
    }
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
