#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgqg/augment.hpp"
#include "kgqg/dataset.hpp"
#include "kgqg/text.hpp"

namespace kgqg {

// The four dialog-context serializations: preceding turns as
// question+answer text, question text only, grounding triples only, or
// triples interleaved with question+answer text.
enum class ContextType { QA_NL, Q_NL, KL, QA_NL_KL };

inline constexpr std::array<ContextType, 4> all_context_types = {
    ContextType::QA_NL, ContextType::Q_NL, ContextType::KL, ContextType::QA_NL_KL};

inline std::string_view to_string(ContextType ct) {
  switch (ct) {
    case ContextType::QA_NL: return "qa_nl";
    case ContextType::Q_NL: return "q_nl";
    case ContextType::KL: return "kl";
    case ContextType::QA_NL_KL: return "qa_nl_kl";
  }
  return "qa_nl";
}

inline std::optional<ContextType> parse_context_type(std::string_view s) {
  if (s == "qa_nl") return ContextType::QA_NL;
  if (s == "q_nl") return ContextType::Q_NL;
  if (s == "kl") return ContextType::KL;
  if (s == "qa_nl_kl") return ContextType::QA_NL_KL;
  return std::nullopt;
}

// One test point: a dialog prefix under one context type and one
// augmented graph, with the next turn as target.
struct EvalInstance {
  std::string dialog_id;
  std::vector<Turn> prefix;
  ContextType context_type = ContextType::QA_NL;
  AugmentedGraph graph;
  std::string root_entity;
  std::string category;
  Turn target;
  bool ablate_graph = false;
  bool ablate_context = false;

  std::size_t prefix_len() const { return prefix.size(); }

  // "dialogId#prefixLen@contextType@n" — predictions self-describe their
  // evaluation condition.
  std::string id() const {
    return dialog_id + "#" + std::to_string(prefix.size()) + "@" +
           std::string(to_string(context_type)) + "@" + std::to_string(graph.n);
  }
};

struct InstanceIdParts {
  std::string dialog_id;
  std::size_t prefix_len = 0;
  ContextType context_type = ContextType::QA_NL;
  int n = 0;
};

// Right-to-left parse so dialog ids may contain '#' or '@'.
inline std::optional<InstanceIdParts> parse_instance_id(std::string_view id) {
  auto at2 = id.rfind('@');
  if (at2 == std::string_view::npos) return std::nullopt;
  auto at1 = id.rfind('@', at2 - 1);
  if (at1 == std::string_view::npos) return std::nullopt;
  auto hash = id.rfind('#', at1 - 1);
  if (hash == std::string_view::npos) return std::nullopt;
  InstanceIdParts p;
  p.dialog_id = std::string(id.substr(0, hash));
  auto ct = parse_context_type(id.substr(at1 + 1, at2 - at1 - 1));
  if (!ct) return std::nullopt;
  p.context_type = *ct;
  try {
    p.prefix_len = std::stoul(std::string(id.substr(hash + 1, at1 - hash - 1)));
    p.n = std::stoi(std::string(id.substr(at2 + 1)));
  } catch (...) {
    return std::nullopt;
  }
  return p;
}

// "<t> <sj> S <p> P <o> O </t>" with single-space separation.
inline std::string serialize_triple(const Triple& t) {
  return "<t> <sj> " + t.subject + " <p> " + t.property + " <o> " + t.object + " </t>";
}

// Strict inverse of serialize_triple: exactly one marker each, in order,
// all slots non-empty, nothing outside the <t>…</t> frame. Tolerates
// markers glued to words and extra whitespace.
inline std::optional<Triple> parse_triple(std::string_view s) {
  std::vector<std::string> toks = marker_tokens(s);
  if (toks.size() < 5) return std::nullopt;
  if (toks.front() != "<t>" || toks.back() != "</t>") return std::nullopt;
  std::string slots[3];
  int slot = -1;
  for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
    const std::string& tok = toks[i];
    if (tok == "<sj>" || tok == "<p>" || tok == "<o>") {
      int want = tok == "<sj>" ? 0 : tok == "<p>" ? 1 : 2;
      if (want != slot + 1) return std::nullopt;  // out of order or repeated
      slot = want;
    } else if (is_marker(tok)) {
      return std::nullopt;  // stray marker inside the frame
    } else {
      if (slot < 0) return std::nullopt;  // text before <sj>
      if (!slots[slot].empty()) slots[slot] += ' ';
      slots[slot] += tok;
    }
  }
  if (slot != 2) return std::nullopt;
  return Triple::try_make(slots[0], slots[1], slots[2]);
}

// Serialize a dialog prefix under one of the four context types.
// Empty prefix → empty string.
inline std::string serialize_context(std::span<const Turn> prefix, ContextType ct) {
  std::string out;
  auto add = [&](const std::string& piece) {
    if (!out.empty()) out += ' ';
    out += piece;
  };
  for (const Turn& t : prefix) {
    switch (ct) {
      case ContextType::QA_NL:
        add("<q> " + t.question + " <a> " + t.answer);
        break;
      case ContextType::Q_NL:
        add("<q> " + t.question);
        break;
      case ContextType::KL:
        add(serialize_triple(t.triple));
        break;
      case ContextType::QA_NL_KL:
        add(serialize_triple(t.triple) + " <q> " + t.question + " <a> " + t.answer);
        break;
    }
  }
  return out;
}

// Partial turn recovered from a serialized context; only the fields the
// context type carries are present.
struct ContextTurn {
  std::optional<Triple> triple;
  std::string question;
  std::string answer;
};

inline std::optional<std::vector<ContextTurn>> parse_context(std::string_view s,
                                                             ContextType ct) {
  std::vector<ContextTurn> out;
  std::vector<std::string> toks = marker_tokens(s);
  std::size_t i = 0;
  auto collect_until_marker = [&]() {
    std::string text;
    while (i < toks.size() && !is_marker(toks[i])) {
      if (!text.empty()) text += ' ';
      text += toks[i++];
    }
    return text;
  };
  auto parse_triple_tokens = [&]() -> std::optional<Triple> {
    if (i >= toks.size() || toks[i] != "<t>") return std::nullopt;
    std::string body = toks[i++];
    while (i < toks.size() && toks[i] != "</t>") body += ' ' + toks[i++];
    if (i >= toks.size()) return std::nullopt;
    body += ' ' + toks[i++];  // "</t>"
    return parse_triple(body);
  };
  while (i < toks.size()) {
    ContextTurn turn;
    switch (ct) {
      case ContextType::QA_NL: {
        if (toks[i] != "<q>") return std::nullopt;
        ++i;
        turn.question = collect_until_marker();
        if (i >= toks.size() || toks[i] != "<a>") return std::nullopt;
        ++i;
        turn.answer = collect_until_marker();
        break;
      }
      case ContextType::Q_NL: {
        if (toks[i] != "<q>") return std::nullopt;
        ++i;
        turn.question = collect_until_marker();
        break;
      }
      case ContextType::KL: {
        auto t = parse_triple_tokens();
        if (!t) return std::nullopt;
        turn.triple = *t;
        break;
      }
      case ContextType::QA_NL_KL: {
        auto t = parse_triple_tokens();
        if (!t) return std::nullopt;
        turn.triple = *t;
        if (i >= toks.size() || toks[i] != "<q>") return std::nullopt;
        ++i;
        turn.question = collect_until_marker();
        if (i >= toks.size() || toks[i] != "<a>") return std::nullopt;
        ++i;
        turn.answer = collect_until_marker();
        break;
      }
    }
    if (turn.question.empty() && !turn.triple && ct != ContextType::KL) return std::nullopt;
    out.push_back(std::move(turn));
  }
  return out;
}

// The 5-element model input: root entity, its category, the graph size,
// the serialized graph, the serialized dialog context. Ablations omit the
// graph fields ([LEN]+[KB]) or the context field ([CTX]) entirely.
inline std::string build_input(const EvalInstance& inst) {
  std::string out = "[E] " + inst.root_entity + " [TYPE] " + inst.category;
  if (!inst.ablate_graph) {
    out += " [LEN] " + std::to_string(inst.graph.order.size());
    std::string graph;
    for (const auto& [t, tag] : inst.graph.order) {
      if (!graph.empty()) graph += ' ';
      graph += serialize_triple(t);
    }
    out += " [KB]";
    if (!graph.empty()) out += ' ' + graph;
  }
  if (!inst.ablate_context) {
    out += " [CTX]";
    std::string ctx = serialize_context(inst.prefix, inst.context_type);
    if (!ctx.empty()) out += ' ' + ctx;
  }
  return out;
}

// Reference output for an instance, in the format the output parser
// consumes.
inline std::string reference_output(const EvalInstance& inst, bool question_only) {
  if (question_only) return inst.target.question;
  return "[TRIPLE] " + serialize_triple(inst.target.triple) + " [QUESTION] " +
         inst.target.question;
}

struct FilterResult {
  std::vector<EvalInstance> kept;
  std::size_t dropped = 0;
};

// Drop instances whose built input exceeds the token limit (proxy for the
// downstream model's input size).
inline FilterResult filter_overlong(std::vector<EvalInstance> instances, std::size_t limit) {
  FilterResult r;
  for (auto& inst : instances) {
    if (token_len(build_input(inst)) > limit)
      ++r.dropped;
    else
      r.kept.push_back(std::move(inst));
  }
  return r;
}

}  // namespace kgqg
