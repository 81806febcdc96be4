#include "dialdep/treebank.hpp"

#include <algorithm>
#include <sstream>

namespace dialdep {

std::optional<int> Utterance::root() const {
  for (const auto& t : tokens) {
    if (t.head == 0) return t.index;
  }
  return std::nullopt;
}

std::size_t Dialogue::token_count() const {
  std::size_t n = 0;
  for (const auto& u : utterances) n += u.size();
  return n;
}

const InterUtteranceLink* Dialogue::link_into(int u) const {
  for (const auto& l : links) {
    if (l.tail.utterance == u) return &l;
  }
  return nullptr;
}

DependencyInstance DependencyInstance::from_utterance(const Utterance& u) {
  DependencyInstance inst;
  inst.heads.reserve(u.size());
  inst.labels.reserve(u.size());
  for (const auto& t : u.tokens) {
    inst.heads.push_back(t.head);
    inst.labels.push_back(t.label);
  }
  return inst;
}

Utterance apply_instance(const Utterance& u, const DependencyInstance& inst) {
  if (inst.heads.size() != u.size() || inst.labels.size() != u.size()) {
    throw LengthMismatch("instance length " + std::to_string(inst.heads.size()) +
                         " does not match utterance length " + std::to_string(u.size()));
  }
  Utterance out = u;
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    out.tokens[i].head = inst.heads[i];
    out.tokens[i].label = inst.labels[i];
  }
  return out;
}

std::string_view violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::EmptyDialogue: return "empty dialogue";
    case ViolationKind::UtteranceIndex: return "utterance index";
    case ViolationKind::EmptyUtterance: return "empty utterance";
    case ViolationKind::TokenIndex: return "token index";
    case ViolationKind::HeadOutOfRange: return "head out of range";
    case ViolationKind::SelfLoop: return "self loop";
    case ViolationKind::NoRoot: return "no root";
    case ViolationKind::MultipleRoots: return "multiple roots";
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::LinkOutOfRange: return "link out of range";
    case ViolationKind::LinkDirection: return "link direction";
    case ViolationKind::LinkTailNotRoot: return "link tail not root";
    case ViolationKind::LinkLabelFamily: return "link label family";
    case ViolationKind::UnlinkedUtterance: return "unlinked utterance";
    case ViolationKind::MultiplyLinked: return "multiply linked utterance";
  }
  return "unknown";
}

bool ValidationReport::contains(ViolationKind k) const {
  return std::any_of(violations.begin(), violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << violation_name(v.kind);
    if (v.utterance >= 0) os << " at utterance " << v.utterance;
    if (v.token > 0) os << " token " << v.token;
    if (!v.detail.empty()) os << ": " << v.detail;
    os << '\n';
  }
  return os.str();
}

ValidationError::ValidationError(std::string dialogue_id, ValidationReport report)
    : Error("dialogue '" + dialogue_id + "' is invalid:\n" + report.to_string()),
      id_(std::move(dialogue_id)),
      report_(std::move(report)) {}

namespace {

// Tree checks shared by utterances and bare instances. `heads[k]` is the head
// of token k+1.
void check_local_tree(std::span<const int> heads, int utterance, std::vector<Violation>& out) {
  const int n = static_cast<int>(heads.size());
  bool heads_ok = true;
  std::vector<int> roots;
  for (int i = 1; i <= n; ++i) {
    const int h = heads[static_cast<std::size_t>(i - 1)];
    if (h < 0 || h > n) {
      out.push_back({ViolationKind::HeadOutOfRange, utterance, i,
                     "head " + std::to_string(h) + " not in 0.." + std::to_string(n)});
      heads_ok = false;
    } else if (h == i) {
      out.push_back({ViolationKind::SelfLoop, utterance, i, {}});
      heads_ok = false;
    } else if (h == 0) {
      roots.push_back(i);
    }
  }
  if (roots.empty()) {
    out.push_back({ViolationKind::NoRoot, utterance, 0, {}});
  } else if (roots.size() > 1) {
    out.push_back({ViolationKind::MultipleRoots, utterance, roots[1],
                   std::to_string(roots.size()) + " tokens attach to the dummy root"});
  }
  if (!heads_ok) return;

  // 0 = unvisited, 1 = on current path, 2 = done
  std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      path.push_back(cur);
      cur = heads[static_cast<std::size_t>(cur - 1)];
    }
    if (state[static_cast<std::size_t>(cur)] == 1) {
      auto it = std::find(path.begin(), path.end(), cur);
      const int smallest = *std::min_element(it, path.end());
      out.push_back({ViolationKind::Cycle, utterance, smallest,
                     std::to_string(path.end() - it) + " tokens form a cycle"});
    }
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
}

}  // namespace

std::vector<Violation> validate_instance(const DependencyInstance& inst) {
  std::vector<Violation> out;
  if (inst.heads.empty()) {
    out.push_back({ViolationKind::EmptyUtterance, -1, 0, {}});
    return out;
  }
  check_local_tree(inst.heads, -1, out);
  return out;
}

ValidationReport validate_dialogue(const Dialogue& d, LinkPolicy policy) {
  ValidationReport report;
  auto& out = report.violations;
  const int m = static_cast<int>(d.utterances.size());
  if (m == 0) {
    out.push_back({ViolationKind::EmptyDialogue, -1, 0, {}});
    return report;
  }

  for (int p = 0; p < m; ++p) {
    const auto& u = d.utterances[static_cast<std::size_t>(p)];
    if (u.index != p) {
      out.push_back({ViolationKind::UtteranceIndex, p, 0,
                     "declared index " + std::to_string(u.index)});
    }
    if (u.tokens.empty()) {
      out.push_back({ViolationKind::EmptyUtterance, p, 0, {}});
      continue;
    }
    std::vector<int> heads;
    heads.reserve(u.size());
    for (std::size_t k = 0; k < u.tokens.size(); ++k) {
      const auto& t = u.tokens[k];
      if (t.index != static_cast<int>(k) + 1) {
        out.push_back({ViolationKind::TokenIndex, p, static_cast<int>(k) + 1,
                       "declared index " + std::to_string(t.index)});
      }
      heads.push_back(t.head);
    }
    check_local_tree(heads, p, out);
  }

  auto token_in_range = [&](const Coord& c) {
    return c.utterance >= 0 && c.utterance < m && c.token >= 1 &&
           c.token <= static_cast<int>(d.utterances[static_cast<std::size_t>(c.utterance)].size());
  };

  std::vector<int> incoming(static_cast<std::size_t>(m), 0);
  for (const auto& l : d.links) {
    if (!token_in_range(l.head) || !token_in_range(l.tail)) {
      out.push_back({ViolationKind::LinkOutOfRange, l.tail.utterance, l.tail.token,
                     "link " + std::to_string(l.head.utterance) + ":" +
                         std::to_string(l.head.token) + " -> " +
                         std::to_string(l.tail.utterance) + ":" + std::to_string(l.tail.token)});
      continue;
    }
    ++incoming[static_cast<std::size_t>(l.tail.utterance)];
    if (l.head.utterance >= l.tail.utterance) {
      out.push_back({ViolationKind::LinkDirection, l.tail.utterance, l.tail.token,
                     "head utterance " + std::to_string(l.head.utterance) +
                         " is not above tail utterance"});
    }
    const auto& tail_u = d.utterances[static_cast<std::size_t>(l.tail.utterance)];
    if (tail_u.tokens[static_cast<std::size_t>(l.tail.token - 1)].head != 0) {
      out.push_back({ViolationKind::LinkTailNotRoot, l.tail.utterance, l.tail.token, {}});
    }
    if (!is_inter_edu(l.label)) {
      out.push_back({ViolationKind::LinkLabelFamily, l.tail.utterance, l.tail.token,
                     std::string(label_name(l.label)) + " is not an inter-EDU label"});
    }
  }
  for (int u = 1; u < m; ++u) {
    const int c = incoming[static_cast<std::size_t>(u)];
    if (c == 0 && policy == LinkPolicy::Required) {
      out.push_back({ViolationKind::UnlinkedUtterance, u, 0, {}});
    } else if (c > 1) {
      out.push_back({ViolationKind::MultiplyLinked, u, 0,
                     std::to_string(c) + " links end in this utterance"});
    }
  }
  return report;
}

std::vector<GlobalArc> to_global_tree(const Dialogue& d) {
  auto report = validate_dialogue(d);
  if (!report.ok()) {
    throw InvalidDialogue("dialogue '" + d.id + "' is invalid:\n" + report.to_string());
  }
  std::vector<int> offset(d.utterances.size(), 0);
  for (std::size_t u = 1; u < d.utterances.size(); ++u) {
    offset[u] = offset[u - 1] + static_cast<int>(d.utterances[u - 1].size());
  }

  std::vector<GlobalArc> arcs;
  arcs.reserve(d.token_count());
  for (std::size_t u = 0; u < d.utterances.size(); ++u) {
    const auto& utt = d.utterances[u];
    for (const auto& t : utt.tokens) {
      GlobalArc a{offset[u] + t.index, 0, t.label};
      if (t.head != 0) {
        a.head = offset[u] + t.head;
      } else if (u == 0) {
        a.label = Label::Root;
      } else {
        const auto* link = d.link_into(static_cast<int>(u));
        a.head = offset[static_cast<std::size_t>(link->head.utterance)] + link->head.token;
        a.label = link->label;
      }
      arcs.push_back(a);
    }
  }
  return arcs;
}

double CorpusStats::avg_turns() const {
  return dialogues == 0 ? 0.0 : static_cast<double>(utterances) / static_cast<double>(dialogues);
}

double CorpusStats::avg_words() const {
  return dialogues == 0 ? 0.0 : static_cast<double>(tokens) / static_cast<double>(dialogues);
}

std::size_t CorpusStats::count(Label l) const {
  auto it = counts.find(l);
  return it == counts.end() ? 0 : it->second;
}

CorpusStats count_labels(std::span<const Dialogue> corpus, LinkPolicy policy) {
  CorpusStats stats;
  for (Label l : all_labels()) stats.counts[l] = 0;
  for (const auto& d : corpus) {
    auto report = validate_dialogue(d, policy);
    if (!report.ok()) {
      throw InvalidDialogue("dialogue '" + d.id + "' is invalid:\n" + report.to_string());
    }
    ++stats.dialogues;
    stats.utterances += d.utterances.size();
    for (const auto& u : d.utterances) {
      stats.tokens += u.size();
      for (const auto& t : u.tokens) ++stats.counts[t.label];
    }
    for (const auto& l : d.links) ++stats.counts[l.label];
  }
  for (const auto& [label, n] : stats.counts) {
    (is_syntactic(label) ? stats.inner : stats.inter) += n;
  }
  return stats;
}

}  // namespace dialdep
