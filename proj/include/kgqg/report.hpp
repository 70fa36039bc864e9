#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgqg/records.hpp"
#include "kgqg/stats.hpp"

namespace kgqg {

// Mean GLEU per context type, with skipped instances counted separately
// so they never deflate the mean.
struct GleuAggregate {
  double sum = 0.0;
  std::size_t n = 0;
  std::size_t skipped = 0;
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

struct QuestionReport {
  std::map<ContextType, GleuAggregate> tq;
  std::map<ContextType, GleuAggregate> quality;
  std::vector<double> quality_values;  // pooled, for significance testing
};

inline QuestionReport aggregate_question_report(const std::vector<QuestionScoreRecord>& recs) {
  QuestionReport rep;
  for (const auto& r : recs) {
    auto parts = parse_instance_id(r.instance_id);
    if (!parts) throw ValidationError("unparseable instance id: " + r.instance_id);
    ContextType ct = parts->context_type;
    if (r.tq_gleu) {
      rep.tq[ct].sum += *r.tq_gleu;
      ++rep.tq[ct].n;
    } else {
      ++rep.tq[ct].skipped;
    }
    if (r.quality_gleu) {
      rep.quality[ct].sum += *r.quality_gleu;
      ++rep.quality[ct].n;
      rep.quality_values.push_back(*r.quality_gleu);
    } else {
      ++rep.quality[ct].skipped;
    }
  }
  return rep;
}

// Everything `report` consumes for one evaluation condition (one run of
// the pipeline, e.g. one ablation setting).
struct ConditionData {
  std::string label;
  std::vector<TripleVerdict> verdicts;
  std::vector<QuestionScoreRecord> scores;
  std::vector<PronounRecord> pronouns;
};

namespace detail {

inline std::string fmt2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

inline std::string fmt4(std::optional<double> v) {
  if (!v) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << *v;
  return os.str();
}

}  // namespace detail

class ReportWriter {
 public:
  ReportWriter(const std::filesystem::path& tsv_path, const std::filesystem::path& json_path)
      : tsv_(tsv_path), tsv_path_(tsv_path.string()), json_path_(json_path.string()) {
    if (!tsv_) throw IoError("cannot open " + tsv_path_);
    root_ = json::object();
  }

  void add_condition(const ConditionData& cond,
                     const std::vector<int>& n_values = {-1, 0, 1, 2, 3}) {
    TripleReport tr = aggregate_triple_report(cond.verdicts);
    json jcond = json::object();
    for (int n : n_values) {
      bool any = false;
      for (auto ct : all_context_types)
        if (tr.by_condition.count({ct, n})) any = true;
      if (!any) continue;
      write_triple_section(cond.label, tr, n, jcond);
    }
    if (!cond.scores.empty()) {
      QuestionReport qr = aggregate_question_report(cond.scores);
      write_question_section(cond.label, qr, jcond);
    }
    if (!cond.pronouns.empty() || !cond.verdicts.empty()) {
      write_pronoun_section(cond, jcond);
    }
    root_["conditions"][cond.label] = std::move(jcond);
  }

  void add_agreement(const std::vector<CriterionAgreement>& rows) {
    tsv_ << "# agreement\n";
    tsv_ << "criterion\ttag\tkappa\tobserved\tpairs\titems\tties\n";
    json jrows = json::array();
    for (const auto& r : rows) {
      tsv_ << r.criterion << '\t' << r.tag << '\t'
           << (r.mean.kappa ? detail::fmt2(*r.mean.kappa) : std::string("-")) << '\t'
           << detail::fmt2(r.mean.observed) << '\t' << r.per_pair.size() << '\t'
           << r.mean.n_items << '\t' << r.tie_items << '\n';
      json jr = {{"criterion", r.criterion},
                 {"tag", r.tag},
                 {"kappa", r.mean.kappa ? json(*r.mean.kappa) : json(nullptr)},
                 {"observed", r.mean.observed},
                 {"pairs", r.per_pair.size()},
                 {"items", r.mean.n_items},
                 {"ties", r.tie_items},
                 {"majority", r.majority}};
      jrows.push_back(std::move(jr));
    }
    tsv_ << '\n';
    root_["agreement"] = std::move(jrows);
  }

  void add_significance(const std::string& label_a, const std::string& label_b,
                        const WelchResult& w, double mean_a, double mean_b) {
    tsv_ << "# significance (quality GLEU, Welch t-test)\n";
    tsv_ << "condition_a\tcondition_b\tmean_a\tmean_b\tt\tp\tdf\n";
    tsv_ << label_a << '\t' << label_b << '\t' << detail::fmt4(mean_a) << '\t'
         << detail::fmt4(mean_b) << '\t' << w.t << '\t' << w.p << '\t' << w.df << "\n\n";
    root_["significance"].push_back({{"a", label_a},
                                     {"b", label_b},
                                     {"mean_a", mean_a},
                                     {"mean_b", mean_b},
                                     {"t", w.t},
                                     {"p", w.p},
                                     {"df", w.df}});
  }

  void finish() {
    tsv_.close();
    if (tsv_.fail()) throw IoError("write failed: " + tsv_path_);
    std::ofstream out(json_path_);
    if (!out) throw IoError("cannot open " + json_path_);
    out << root_.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + json_path_);
  }

  const json& data() const { return root_; }

 private:
  void write_triple_section(const std::string& label, const TripleReport& tr, int n,
                            json& jcond) {
    const std::string nkey = n < 0 ? "all" : std::to_string(n);
    tsv_ << "# triples condition=" << label << " n=" << nkey << '\n';
    tsv_ << "row";
    std::vector<ContextType> cts;
    for (auto ct : all_context_types)
      if (tr.by_condition.count({ct, n})) cts.push_back(ct);
    for (auto ct : cts) tsv_ << '\t' << to_string(ct) << "\t%";
    tsv_ << '\n';

    auto counts_of = [&](ContextType ct) -> const TripleCounts& {
      return tr.by_condition.at({ct, n});
    };
    json jsec = json::object();

    auto row = [&](const std::string& name,
                   const std::function<std::size_t(const TripleCounts&)>& value,
                   bool with_pct = true) {
      tsv_ << name;
      for (auto ct : cts) {
        const TripleCounts& c = counts_of(ct);
        std::size_t v = value(c);
        tsv_ << '\t' << v;
        if (with_pct)
          tsv_ << '\t' << percent(v, c.total);
        else
          tsv_ << '\t';
        jsec[name][std::string(to_string(ct))] = {
            {"count", v}, {"percent", with_pct ? json(percent(v, c.total)) : json(nullptr)}};
      }
      tsv_ << '\n';
    };

    row("test_examples", [](const TripleCounts& c) { return c.total; }, false);
    row("distinct_generated_triples",
        [](const TripleCounts& c) { return c.distinct_triples.size(); }, false);
    row("relevant", [](const TripleCounts& c) { return c.relevant; });
    row("exact_match", [](const TripleCounts& c) {
      auto it = c.primary.find(TripleLabel::ExactMatch);
      return it == c.primary.end() ? 0ul : it->second;
    });
    row("other_from_input_graph", [](const TripleCounts& c) {
      auto it = c.primary.find(TripleLabel::OtherFromInputGraph);
      return it == c.primary.end() ? 0ul : it->second;
    });
    row("irrelevant", [](const TripleCounts& c) { return c.total - c.relevant; });
    auto any_of = [](TripleLabel l) {
      return [l](const TripleCounts& c) {
        auto it = c.any.find(l);
        return it == c.any.end() ? 0ul : it->second;
      };
    };
    row("repetitions", any_of(TripleLabel::Repetition));
    row("oos_entity_triples", any_of(TripleLabel::OOSEntityGenerated));
    row("oos_property_triples", any_of(TripleLabel::OOSPropertyGenerated));
    row("noise_triples", any_of(TripleLabel::NoiseGenerated));
    row("ill_formed_triples", any_of(TripleLabel::IllFormed));
    row("triples_not_in_kb", any_of(TripleLabel::NotInKB));
    row("off_graph_triples", any_of(TripleLabel::OffGraph));
    row("oos_entity_predicate", [](const TripleCounts& c) { return c.oos_entity_predicate; });
    row("oos_property_predicate",
        [](const TripleCounts& c) { return c.oos_property_predicate; });
    row("subject_not_in_kb", [](const TripleCounts& c) { return c.subject_unknown; });
    row("property_not_in_kb", [](const TripleCounts& c) { return c.property_unknown; });
    row("object_not_in_kb", [](const TripleCounts& c) { return c.object_unknown; });
    tsv_ << '\n';
    jcond["triples"][nkey] = std::move(jsec);
  }

  void write_question_section(const std::string& label, const QuestionReport& qr,
                              json& jcond) {
    tsv_ << "# question_gleu condition=" << label << '\n';
    tsv_ << "metric";
    for (auto ct : all_context_types) tsv_ << '\t' << to_string(ct);
    tsv_ << '\n';
    json jsec = json::object();
    auto write_metric = [&](const std::string& name,
                            const std::map<ContextType, GleuAggregate>& m) {
      tsv_ << name;
      for (auto ct : all_context_types) {
        auto it = m.find(ct);
        std::optional<double> mean = it == m.end() ? std::nullopt : it->second.mean();
        tsv_ << '\t' << detail::fmt4(mean);
        jsec[name][std::string(to_string(ct))] = {
            {"mean", mean ? json(*mean) : json(nullptr)},
            {"n", it == m.end() ? 0 : it->second.n},
            {"skipped", it == m.end() ? 0 : it->second.skipped}};
      }
      tsv_ << '\n';
    };
    write_metric("triple_question_gleu", qr.tq);
    write_metric("question_quality_gleu", qr.quality);
    tsv_ << '\n';
    jcond["question_gleu"] = std::move(jsec);
  }

  void write_pronoun_section(const ConditionData& cond, json& jcond) {
    std::map<ContextType, std::size_t> totals;
    std::map<ContextType, std::set<std::string>> distinct;
    for (const TripleVerdict& v : cond.verdicts) {
      auto parts = parse_instance_id(v.instance_id);
      if (!parts) continue;
      ++totals[parts->context_type];
      if (v.triple) distinct[parts->context_type].insert(v.triple->key());
    }
    PronounReport pr = aggregate_pronoun_report(cond.pronouns, totals, distinct);
    tsv_ << "# pronouns condition=" << cond.label << '\n';
    tsv_ << "row";
    for (auto ct : all_context_types) tsv_ << '\t' << to_string(ct) << "\t%";
    tsv_ << '\n';
    json jsec = json::object();
    auto row = [&](const std::string& name,
                   const std::function<std::pair<std::size_t, std::size_t>(
                       const PronounCounts&)>& value) {
      tsv_ << name;
      for (auto ct : all_context_types) {
        auto it = pr.by_context.find(ct);
        std::size_t v = 0, denom = 0;
        if (it != pr.by_context.end()) std::tie(v, denom) = value(it->second);
        tsv_ << '\t' << v << '\t' << percent(v, denom);
        jsec[name][std::string(to_string(ct))] = {{"count", v},
                                                  {"percent", percent(v, denom)}};
      }
      tsv_ << '\n';
    };
    row("questions_with_pronoun", [](const PronounCounts& c) {
      return std::pair{c.instances_with_pronoun, c.instances};
    });
    for (auto form : core_pronouns)
      row("form_" + std::string(form), [form](const PronounCounts& c) {
        auto it = c.by_form.find(std::string(form));
        return std::pair{it == c.by_form.end() ? 0ul : it->second, c.pronouns};
      });
    row("gender_mistakes",
        [](const PronounCounts& c) { return std::pair{c.mistakes, c.pronouns}; });
    for (auto form : core_pronouns)
      row("mistake_" + std::string(form), [form](const PronounCounts& c) {
        auto it = c.mistakes_by_form.find(std::string(form));
        return std::pair{it == c.mistakes_by_form.end() ? 0ul : it->second, c.mistakes};
      });
    row("ambiguous_pronouns",
        [](const PronounCounts& c) { return std::pair{c.ambiguous, c.pronouns}; });
    for (auto form : core_pronouns)
      row("ambiguous_" + std::string(form), [form](const PronounCounts& c) {
        auto it = c.ambiguous_by_form.find(std::string(form));
        return std::pair{it == c.ambiguous_by_form.end() ? 0ul : it->second, c.ambiguous};
      });
    row("pronominalized_distinct_triples", [](const PronounCounts& c) {
      return std::pair{c.pronominalized_triples.size(), c.distinct_triples.size()};
    });
    row("possessive_pronouns", [](const PronounCounts& c) {
      return std::pair{c.possessive_pronouns,
                       c.possessive_pronouns + c.pronouns};
    });
    row("possessive_mistakes", [](const PronounCounts& c) {
      return std::pair{c.possessive_mistakes, c.possessive_pronouns};
    });
    row("unjudged_pronouns", [](const PronounCounts& c) {
      return std::pair{c.unjudged, c.unjudged + c.pronouns + c.possessive_pronouns};
    });
    tsv_ << '\n';
    jcond["pronouns"] = std::move(jsec);
  }

  std::ofstream tsv_;
  std::string tsv_path_;
  std::string json_path_;
  json root_;
};

}  // namespace kgqg
