#include "dialdep/transform.hpp"

#include <cstdlib>

namespace dialdep {

void TransformConfig::validate() const {
  for (Label l : transforming) {
    if (!is_syntactic(l)) {
      throw InvalidArgument("transforming label '" + std::string(label_name(l)) +
                            "' is not syntactic");
    }
  }
  for (Label l : reversal) {
    if (!is_inter_edu(l)) {
      throw InvalidArgument("reversal signal '" + std::string(label_name(l)) +
                            "' is not inter-EDU");
    }
  }
  if (min_span < 1) throw InvalidArgument("minimum span k must be >= 1");
  if (greeting_name.empty()) throw InvalidArgument("greeting pseudo-signal name is empty");
  if (parse_label(greeting_name)) {
    throw InvalidArgument("greeting pseudo-signal name collides with label '" + greeting_name + "'");
  }
  if (!is_inter_edu(link_fallback)) throw InvalidArgument("link fallback must be inter-EDU");
  if (!is_inter_edu(greeting_label)) throw InvalidArgument("greeting label must be inter-EDU");
}

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Relabel: return "relabel";
    case Rule::Reverse: return "reverse";
    case Rule::Greeting: return "greeting";
    case Rule::NoTail: return "no-tail";
    case Rule::Conflict: return "conflict";
  }
  return "unknown";
}

std::size_t TransformLog::count(Rule r) const {
  std::size_t c = 0;
  for (const auto& e : events) c += e.rule == r;
  return c;
}

std::optional<int> find_tail(const DependencyInstance& inst, std::span<const EduSpan> edus,
                             int i) {
  const int n = static_cast<int>(inst.size());
  auto of = edu_membership(edus, n);
  const int own = of[static_cast<std::size_t>(i)];
  for (int t = 1; t <= n; ++t) {
    const int e = of[static_cast<std::size_t>(t)];
    if (t != i && inst.head(t) == i && e >= 0 && e != own) return t;
  }
  return std::nullopt;
}

std::vector<bool> relabel_mask(const DependencyInstance& inst, std::span<const EduSpan> edus,
                               const TransformConfig& cfg) {
  const int n = static_cast<int>(inst.size());
  auto of = edu_membership(edus, n);
  std::vector<bool> mask(static_cast<std::size_t>(n) + 1, false);
  for (int i = 1; i <= n; ++i) {
    const int h = inst.head(i);
    const bool crosses = h == 0 || of[static_cast<std::size_t>(h)] != of[static_cast<std::size_t>(i)];
    const bool spans = cfg.transforming.count(inst.label(i)) && std::abs(i - h) >= cfg.min_span;
    mask[static_cast<std::size_t>(i)] = crosses || spans;
  }
  return mask;
}

namespace {

void require_tree(const DependencyInstance& inst, int utterance, const char* stage) {
  auto v = validate_instance(inst);
  if (v.empty()) return;
  std::string msg = std::string(stage) + " arcs of utterance " + std::to_string(utterance) +
                    " are not a tree:";
  for (const auto& x : v) {
    msg += " ";
    msg += violation_name(x.kind);
    if (x.token > 0) msg += "@" + std::to_string(x.token);
  }
  msg += "; heads [";
  for (std::size_t k = 0; k < inst.heads.size(); ++k) {
    msg += (k ? "," : "") + std::to_string(inst.heads[k]);
  }
  msg += "]";
  throw BrokenTree(msg);
}

}  // namespace

PostTranResult posttran(const DependencyInstance& inst, std::span<const EduSpan> edus,
                        std::span<const Signal> signals, const TransformConfig& cfg,
                        int utterance) {
  const int n = static_cast<int>(inst.size());
  if (inst.labels.size() != inst.heads.size()) {
    throw LengthMismatch("instance has " + std::to_string(inst.heads.size()) + " heads and " +
                         std::to_string(inst.labels.size()) + " labels");
  }
  if (static_cast<int>(signals.size()) != n) {
    throw LengthMismatch("signal sequence has " + std::to_string(signals.size()) +
                         " positions, utterance has " + std::to_string(n));
  }
  if (!partitions(edus, n)) {
    auto of = edu_membership(edus, n);
    for (int t = 1; t <= n; ++t) {
      if (of[static_cast<std::size_t>(t)] < 0) throw UncoveredToken(t);
    }
    throw UncoveredToken(0);
  }
  require_tree(inst, utterance, "input");

  PostTranResult res{inst, {}};
  res.instance.confidence = inst.confidence;
  auto& out = res.instance;
  auto at = [](auto& v, int pos) -> auto& { return v[static_cast<std::size_t>(pos - 1)]; };

  const auto fires = relabel_mask(inst, edus, cfg);
  for (int i = 1; i <= n; ++i) {
    if (!fires[static_cast<std::size_t>(i)]) continue;
    const Label next = at(signals, i).as_label(cfg.greeting_label);
    at(out.labels, i) = next;
    res.events.push_back({utterance, i, Rule::Relabel, 0, inst.head(i), inst.head(i),
                          inst.label(i), next});
  }

  std::vector<bool> touched(static_cast<std::size_t>(n) + 1, false);
  for (int i = 1; i <= n; ++i) {
    if (!fires[static_cast<std::size_t>(i)]) continue;
    const Signal sig = at(signals, i);
    const bool reverse = !sig.is_greeting() && cfg.reversal.count(sig.relation_label());
    const bool greeting = sig.is_greeting() && inst.head(i) == 0;
    if (!reverse && !greeting) continue;

    auto t = find_tail(inst, edus, i);
    if (!t) {
      res.events.push_back({utterance, i, Rule::NoTail, 0, inst.head(i), at(out.heads, i),
                            inst.label(i), at(out.labels, i)});
      continue;
    }
    if (touched[static_cast<std::size_t>(i)] || touched[static_cast<std::size_t>(*t)]) {
      res.events.push_back({utterance, i, Rule::Conflict, *t, inst.head(i), at(out.heads, i),
                            inst.label(i), at(out.labels, i)});
      continue;
    }
    touched[static_cast<std::size_t>(i)] = touched[static_cast<std::size_t>(*t)] = true;

    if (reverse) {
      at(out.heads, *t) = inst.head(i);
      at(out.heads, i) = *t;
      if (cfg.tail_label == TailLabel::Signal) at(out.labels, *t) = sig.relation_label();
      res.events.push_back({utterance, i, Rule::Reverse, *t, inst.head(i), *t, inst.label(i),
                            at(out.labels, i)});
    } else {
      at(out.heads, i) = *t;
      at(out.labels, i) = cfg.greeting_label;
      at(out.heads, *t) = 0;
      at(out.labels, *t) = Label::Root;
      res.events.push_back({utterance, i, Rule::Greeting, *t, inst.head(i), *t, inst.label(i),
                            cfg.greeting_label});
    }
  }

  require_tree(out, utterance, "rewritten");
  return res;
}

std::optional<Signal> UtteranceTransform::root_signal() const {
  auto root = utterance.root();
  if (!root) return std::nullopt;
  for (std::size_t k = 0; k < edus.size(); ++k) {
    if (edus[k].contains(*root)) return edu_signals[k];
  }
  return std::nullopt;
}

UtteranceTransform pretran(std::string_view dialogue_id, const Utterance& u,
                           const SignalSource& source, const SegmenterConfig& seg,
                           const TransformConfig& cfg) {
  UtteranceTransform ut;
  const auto inst = DependencyInstance::from_utterance(u);
  ut.edus = segment(u, inst, seg);
  ut.edu_signals = detect_edu_signals(dialogue_id, u, ut.edus, source);
  ut.signals = expand_signals(ut.edus, ut.edu_signals, static_cast<int>(u.size()));
  auto res = posttran(inst, ut.edus, ut.signals, cfg, u.index);
  ut.utterance = apply_instance(u, res.instance);
  ut.events = std::move(res.events);
  return ut;
}

std::vector<InterUtteranceLink> link_utterances(
    const Dialogue& d, std::span<const std::optional<Signal>> root_signals,
    const TransformConfig& cfg) {
  if (root_signals.size() != d.utterances.size()) {
    throw LengthMismatch("got " + std::to_string(root_signals.size()) + " root signals for " +
                         std::to_string(d.utterances.size()) + " utterances");
  }
  std::vector<int> roots;
  roots.reserve(d.utterances.size());
  for (const auto& u : d.utterances) {
    auto r = u.root();
    if (!r) {
      throw MissingRoot("dialogue '" + d.id + "' utterance " + std::to_string(u.index) +
                        " has no root");
    }
    roots.push_back(*r);
  }
  std::vector<InterUtteranceLink> links;
  for (std::size_t u = 1; u < d.utterances.size(); ++u) {
    const auto& sig = root_signals[u - 1];
    const Label label = sig && !sig->is_greeting() ? sig->relation_label() : cfg.link_fallback;
    links.push_back({Coord{static_cast<int>(u - 1), roots[u - 1]},
                     Coord{static_cast<int>(u), roots[u]}, label});
  }
  return links;
}

DialogueTransform transform_dialogue(const Dialogue& d, const SignalSource& source,
                                     const SegmenterConfig& seg, const TransformConfig& cfg,
                                     TransformMode mode) {
  DialogueTransform out{Dialogue{d.id, {}, {}}, TransformLog{d.id, {}}};
  std::vector<std::optional<Signal>> root_signals;
  for (const auto& u : d.utterances) {
    auto ut = pretran(d.id, u, source, seg, cfg);
    root_signals.push_back(ut.root_signal());
    out.dialogue.utterances.push_back(std::move(ut.utterance));
    for (auto& e : ut.events) out.log.events.push_back(e);
  }

  if (mode == TransformMode::Post) {
    out.dialogue.links = link_utterances(out.dialogue, root_signals, cfg);
  } else {
    for (auto l : d.links) {
      const auto& tail_u = out.dialogue.utterances[static_cast<std::size_t>(l.tail.utterance)];
      if (auto r = tail_u.root()) l.tail.token = *r;
      out.dialogue.links.push_back(l);
    }
  }

  auto report = validate_dialogue(out.dialogue, mode == TransformMode::Post
                                                    ? LinkPolicy::Required
                                                    : LinkPolicy::Optional);
  if (!report.ok()) {
    throw BrokenTree("transformed dialogue '" + d.id + "' is invalid:\n" + report.to_string());
  }
  return out;
}

}  // namespace dialdep
