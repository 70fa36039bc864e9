#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "kgqg/dataset.hpp"
#include "kgqg/errors.hpp"

namespace kgqg {

// Fixed tie-break orders for majority voting: earlier label wins a tie.
inline const std::vector<std::string>& label_order(const std::string& criterion) {
  static const std::vector<std::string> binary = {"yes", "no"};
  static const std::vector<std::string> ternary = {"high", "medium", "low"};
  return criterion == "coherence" ? ternary : binary;
}

struct VoteResult {
  std::string label;
  bool tie = false;
};

inline VoteResult majority_vote(const std::vector<std::string>& votes,
                                const std::vector<std::string>& order) {
  if (votes.empty()) throw ValidationError("majority_vote on zero votes");
  std::map<std::string, std::size_t> counts;
  for (const std::string& v : votes) ++counts[v];
  std::size_t best = 0;
  for (const auto& [l, c] : counts) best = std::max(best, c);
  std::vector<std::string> winners;
  for (const std::string& l : order)
    if (counts.count(l) && counts[l] == best) winners.push_back(l);
  for (const auto& [l, c] : counts)  // labels outside the declared order, stable fallback
    if (c == best && std::find(winners.begin(), winners.end(), l) == winners.end())
      winners.push_back(l);
  return {winners.front(), winners.size() > 1};
}

struct AgreementResult {
  std::optional<double> kappa;  // absent when chance agreement p_e = 1
  double observed = 0.0;
  std::size_t n_items = 0;
};

// Cohen's kappa and observed agreement over the items both annotators
// labeled. κ = (p_o − p_e)/(1 − p_e) with p_e from the two marginal label
// distributions.
inline AgreementResult pairwise_agreement(const std::map<std::string, std::string>& ann_a,
                                          const std::map<std::string, std::string>& ann_b) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [item, la] : ann_a) {
    auto it = ann_b.find(item);
    if (it != ann_b.end()) pairs.emplace_back(la, it->second);
  }
  if (pairs.size() < 2)
    throw InsufficientOverlap("only " + std::to_string(pairs.size()) + " co-annotated items");
  const double n = static_cast<double>(pairs.size());
  std::size_t agree = 0;
  std::map<std::string, std::size_t> ca, cb;
  for (const auto& [la, lb] : pairs) {
    if (la == lb) ++agree;
    ++ca[la];
    ++cb[lb];
  }
  AgreementResult r;
  r.n_items = pairs.size();
  r.observed = agree / n;
  // p_e = 1 exactly when both annotators use a single identical label.
  const bool degenerate = ca.size() == 1 && cb.size() == 1 && ca.begin()->first == cb.begin()->first;
  if (degenerate) return r;
  double pe = 0.0;
  for (const auto& [l, c] : ca) {
    auto it = cb.find(l);
    if (it != cb.end()) pe += (c / n) * (it->second / n);
  }
  r.kappa = (r.observed - pe) / (1.0 - pe);
  return r;
}

// Unweighted mean over annotator pairs; pairs whose κ is undefined are
// excluded from the κ mean but kept in the observed mean.
inline AgreementResult mean_agreement(const std::vector<AgreementResult>& pairs) {
  if (pairs.empty()) throw InsufficientOverlap("no annotator pairs");
  AgreementResult r;
  double ksum = 0.0, osum = 0.0;
  std::size_t kn = 0;
  for (const AgreementResult& p : pairs) {
    osum += p.observed;
    r.n_items += p.n_items;
    if (p.kappa) {
      ksum += *p.kappa;
      ++kn;
    }
  }
  r.observed = osum / static_cast<double>(pairs.size());
  if (kn > 0) r.kappa = ksum / static_cast<double>(kn);
  return r;
}

struct WelchResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

// Welch's unequal-variance t-test, two-sided p via the Student-t survival
// function with Welch–Satterthwaite degrees of freedom.
inline WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw DegenerateSample("welch_t_test needs at least 2 observations per sample");
  auto mean_var = [](std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair<double, double>{mean, ss / (n - 1.0)};
  };
  const auto [ma, va] = mean_var(a);
  const auto [mb, vb] = mean_var(b);
  if (va == 0.0 && vb == 0.0)
    throw DegenerateSample("both samples have zero variance");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double se2 = va / na + vb / nb;
  WelchResult r;
  r.t = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 /
         ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  boost::math::students_t_distribution<double> dist(r.df);
  r.p = 2.0 * boost::math::cdf(dist, -std::fabs(r.t));
  return r;
}

// Per-(criterion, model-tag) agreement summary plus majority-vote shares,
// mirroring the human-evaluation tables.
struct CriterionAgreement {
  std::string criterion;
  std::string tag;
  AgreementResult mean;
  std::vector<AgreementResult> per_pair;
  std::map<std::string, std::size_t> majority;  // final label → item count
  std::size_t tie_items = 0;
};

inline std::vector<CriterionAgreement> agreement_summary(
    const std::vector<AnnotationRecord>& records, const std::string& tag) {
  std::vector<CriterionAgreement> out;
  for (const char* criterion : {"fluency", "repetition", "coherence"}) {
    // annotator → item → label
    std::map<std::string, std::map<std::string, std::string>> per_annotator;
    std::map<std::string, std::vector<std::string>> votes_per_item;
    for (const AnnotationRecord& r : records) {
      const std::string& label = criterion == std::string("fluency") ? r.fluency
                                 : criterion == std::string("repetition") ? r.repetition
                                                                          : r.coherence;
      per_annotator[r.annotator_id][r.item_id] = label;
      votes_per_item[r.item_id].push_back(label);
    }
    CriterionAgreement ca;
    ca.criterion = criterion;
    ca.tag = tag;
    std::vector<std::string> annotators;
    for (const auto& [a, _] : per_annotator) annotators.push_back(a);
    for (std::size_t i = 0; i < annotators.size(); ++i)
      for (std::size_t j = i + 1; j < annotators.size(); ++j) {
        try {
          ca.per_pair.push_back(
              pairwise_agreement(per_annotator[annotators[i]], per_annotator[annotators[j]]));
        } catch (const InsufficientOverlap&) {
          // pair never annotated the same items; skip
        }
      }
    if (!ca.per_pair.empty()) ca.mean = mean_agreement(ca.per_pair);
    for (const auto& [item, votes] : votes_per_item) {
      VoteResult v = majority_vote(votes, label_order(criterion));
      ++ca.majority[v.label];
      if (v.tie) ++ca.tie_items;
    }
    out.push_back(std::move(ca));
  }
  return out;
}

}  // namespace kgqg
