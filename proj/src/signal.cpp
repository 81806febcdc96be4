#include "dialdep/signal.hpp"

namespace dialdep {

void SignalLexicon::add(std::string word, Signal signal) {
  if (word.empty()) throw InvalidArgument("lexicon word is empty");
  auto [it, inserted] = entries_.emplace(std::move(word), signal);
  if (!inserted) throw InvalidArgument("duplicate lexicon word '" + it->first + "'");
}

std::optional<Signal> SignalLexicon::find(std::string_view word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::set<Signal> SignalLexicon::signals() const {
  std::set<Signal> out;
  for (const auto& [w, s] : entries_) out.insert(s);
  return out;
}

std::optional<Signal> detect_lexicon(std::span<const std::string> forms,
                                     const SignalLexicon& lex) {
  for (const auto& f : forms) {
    if (auto s = lex.find(f)) return s;
  }
  return std::nullopt;
}

std::optional<Signal> detect_lexicon(const Utterance& u, const EduSpan& edu,
                                     const SignalLexicon& lex) {
  for (int t = edu.start; t <= edu.end; ++t) {
    if (auto s = lex.find(u.tokens[static_cast<std::size_t>(t - 1)].form)) return s;
  }
  return std::nullopt;
}

SignalDistribution group_mean(const WordDistribution& wd, const SignalLexicon& lex) {
  if (lex.empty()) throw EmptyLexicon();
  for (const auto& [w, p] : wd) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument("word probability for '" + w + "' outside [0,1]");
    }
  }
  std::map<Signal, std::pair<double, std::size_t>> groups;
  for (const auto& [word, signal] : lex.entries()) {
    auto& [sum, count] = groups[signal];
    auto it = wd.find(word);
    if (it != wd.end()) sum += it->second;
    ++count;
  }
  SignalDistribution out;
  double total = 0.0;
  for (const auto& [signal, g] : groups) {
    const double mean = g.first / static_cast<double>(g.second);
    out[signal] = mean;
    total += mean;
  }
  for (auto& [signal, p] : out) {
    p = total > 0.0 ? p / total : 1.0 / static_cast<double>(out.size());
  }
  return out;
}

std::optional<Signal> argmax(const SignalDistribution& dist) {
  std::optional<Signal> best;
  double best_p = 0.0;
  for (const auto& [signal, p] : dist) {
    if (!best || p > best_p) {
      best = signal;
      best_p = p;
    }
  }
  return best;
}

SignalSource SignalSource::from_lexicon(SignalLexicon lex) {
  SignalSource s;
  s.lexicon_ = std::move(lex);
  return s;
}

SignalSource SignalSource::from_distributions(std::map<EduKey, SignalDistribution> table) {
  SignalSource s;
  s.table_ = std::move(table);
  return s;
}

std::optional<Signal> SignalSource::detect(std::string_view dialogue_id, const Utterance& u,
                                           const EduSpan& edu) const {
  if (lexicon_) return detect_lexicon(u, edu, *lexicon_);
  auto it = table_.find(EduKey{std::string(dialogue_id), u.index, edu.start, edu.end});
  if (it == table_.end()) return std::nullopt;
  return argmax(it->second);
}

namespace {

void require_partition(std::span<const EduSpan> edus, int n) {
  if (partitions(edus, n)) return;
  auto of = edu_membership(edus, n);
  for (int t = 1; t <= n; ++t) {
    if (of[static_cast<std::size_t>(t)] < 0) throw UncoveredToken(t);
  }
  // overlapping or out-of-order spans: report the first token covered twice
  std::vector<int> cover(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& s : edus) {
    for (int t = s.start; t <= s.end; ++t) {
      if (t < 1 || t > n || ++cover[static_cast<std::size_t>(t)] > 1) throw UncoveredToken(t);
    }
  }
  throw UncoveredToken(0);
}

}  // namespace

std::vector<std::optional<Signal>> detect_edu_signals(std::string_view dialogue_id,
                                                      const Utterance& u,
                                                      std::span<const EduSpan> edus,
                                                      const SignalSource& source) {
  require_partition(edus, static_cast<int>(u.size()));
  std::vector<std::optional<Signal>> out;
  out.reserve(edus.size());
  for (const auto& e : edus) out.push_back(source.detect(dialogue_id, u, e));
  return out;
}

std::vector<Signal> expand_signals(std::span<const EduSpan> edus,
                                   std::span<const std::optional<Signal>> edu_signals, int n,
                                   Label fallback) {
  if (edu_signals.size() != edus.size()) {
    throw LengthMismatch(std::to_string(edu_signals.size()) + " EDU signals for " +
                         std::to_string(edus.size()) + " EDUs");
  }
  require_partition(edus, n);
  std::vector<Signal> s(static_cast<std::size_t>(n), Signal::relation(fallback));
  for (std::size_t k = 0; k < edus.size(); ++k) {
    const Signal sig = edu_signals[k].value_or(Signal::relation(fallback));
    for (int t = edus[k].start; t <= edus[k].end; ++t) s[static_cast<std::size_t>(t - 1)] = sig;
  }
  return s;
}

std::vector<Signal> signals_for_utterance(std::string_view dialogue_id, const Utterance& u,
                                          std::span<const EduSpan> edus,
                                          const SignalSource& source, Label fallback) {
  auto per_edu = detect_edu_signals(dialogue_id, u, edus, source);
  return expand_signals(edus, per_edu, static_cast<int>(u.size()), fallback);
}

}  // namespace dialdep
