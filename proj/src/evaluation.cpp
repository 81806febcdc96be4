#include "dialdep/evaluation.hpp"

#include <algorithm>

namespace dialdep {

std::optional<double> AttachmentCounts::uas() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(head_correct) / static_cast<double>(total);
}

std::optional<double> AttachmentCounts::las() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(both_correct) / static_cast<double>(total);
}

AttachmentCounts& AttachmentCounts::operator+=(const AttachmentCounts& o) {
  total += o.total;
  head_correct += o.head_correct;
  both_correct += o.both_correct;
  return *this;
}

namespace {

void check_aligned(std::span<const Dialogue> pred, std::span<const Dialogue> gold) {
  if (pred.size() != gold.size()) {
    throw CorpusMismatch("prediction has " + std::to_string(pred.size()) +
                         " dialogues, gold has " + std::to_string(gold.size()));
  }
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto& p = pred[k];
    const auto& g = gold[k];
    if (p.id != g.id) {
      throw CorpusMismatch("dialogue " + std::to_string(k) + ": '" + p.id + "' vs '" + g.id + "'");
    }
    if (p.utterances.size() != g.utterances.size()) {
      throw CorpusMismatch("dialogue '" + g.id + "' utterance counts differ");
    }
    for (std::size_t u = 0; u < g.utterances.size(); ++u) {
      if (p.utterances[u].size() != g.utterances[u].size()) {
        throw CorpusMismatch("dialogue '" + g.id + "' utterance " + std::to_string(u) +
                             " token counts differ");
      }
    }
  }
}

}  // namespace

AttachmentScores attachment_scores(std::span<const Dialogue> pred, std::span<const Dialogue> gold) {
  check_aligned(pred, gold);
  AttachmentScores s;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto p = to_global_tree(pred[k]);
    const auto g = to_global_tree(gold[k]);
    for (std::size_t i = 0; i < g.size(); ++i) {
      AttachmentCounts c{1, 0, 0};
      if (p[i].head == g[i].head) {
        c.head_correct = 1;
        c.both_correct = p[i].label == g[i].label ? 1 : 0;
      }
      (is_syntactic(g[i].label) ? s.inner : s.inter) += c;
      s.by_label[g[i].label] += c;
    }
  }
  s.overall = s.inner;
  s.overall += s.inter;
  return s;
}

std::optional<double> matching_score(std::span<const Dialogue> pred,
                                     std::span<const Dialogue> gold, Label syntactic,
                                     Label inter_edu) {
  if (!is_syntactic(syntactic)) {
    throw InvalidArgument("'" + std::string(label_name(syntactic)) + "' is not a syntactic label");
  }
  if (!is_inter_edu(inter_edu)) {
    throw InvalidArgument("'" + std::string(label_name(inter_edu)) + "' is not an inter-EDU label");
  }
  check_aligned(pred, gold);
  std::size_t total = 0, correct = 0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto p = to_global_tree(pred[k]);
    const auto g = to_global_tree(gold[k]);
    std::size_t i = 0;
    for (const auto& u : pred[k].utterances) {
      for (const auto& t : u.tokens) {
        if (g[i].label == inter_edu) {
          ++total;
          const Label predicted = t.label == syntactic ? inter_edu : t.label;
          correct += p[i].head == g[i].head && predicted == inter_edu;
        }
        ++i;
      }
    }
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<std::pair<Label, double>> matching_ranking(std::span<const Dialogue> pred,
                                                       std::span<const Dialogue> gold,
                                                       Label syntactic, std::size_t top) {
  std::vector<std::pair<Label, double>> out;
  for (Label l : all_labels()) {
    if (!is_inter_edu(l)) continue;
    if (auto s = matching_score(pred, gold, syntactic, l)) out.emplace_back(l, *s);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > top) out.resize(top);
  return out;
}

std::map<Label, SignalMatch> signal_matching(std::span<const Dialogue> gold,
                                             const SignalLexicon& lex,
                                             const SegmenterConfig& seg) {
  std::map<Label, SignalMatch> out;
  for (const auto& d : gold) {
    const auto arcs = to_global_tree(d);
    std::size_t i = 0;
    for (const auto& u : d.utterances) {
      const auto edus = segment(u, DependencyInstance::from_utterance(u), seg);
      for (const auto& t : u.tokens) {
        const Label l = arcs[i++].label;
        if (!is_inter_edu(l)) continue;
        auto& m = out[l];
        ++m.arcs;
        auto edu = std::find_if(edus.begin(), edus.end(),
                                [&](const EduSpan& e) { return e.contains(t.index); });
        auto sig = detect_lexicon(u, *edu, lex);
        if (sig && !sig->is_greeting() && sig->relation_label() == l) ++m.matched;
      }
    }
  }
  return out;
}

}  // namespace dialdep
