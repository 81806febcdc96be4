#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "dialdep/labels.hpp"
#include "dialdep/segment.hpp"
#include "dialdep/treebank.hpp"

namespace dialdep {

// Word -> signal dictionary. Keys are non-empty token forms.
class SignalLexicon {
 public:
  // Throws InvalidArgument on an empty word or a word already present.
  void add(std::string word, Signal signal);

  std::optional<Signal> find(std::string_view word) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Signal, std::less<>>& entries() const { return entries_; }

  // Signals with at least one word, in inventory order.
  std::set<Signal> signals() const;

 private:
  std::map<std::string, Signal, std::less<>> entries_;
};

// Probability of each lexicon word at the masked positions, restricted to the
// lexicon's support; not necessarily normalized.
using WordDistribution = std::map<std::string, double, std::less<>>;

// Probability per signal; iteration follows inventory order.
using SignalDistribution = std::map<Signal, double>;

// Signal of the first form, left to right, that is a lexicon key.
std::optional<Signal> detect_lexicon(std::span<const std::string> forms,
                                     const SignalLexicon& lex);
std::optional<Signal> detect_lexicon(const Utterance& u, const EduSpan& edu,
                                     const SignalLexicon& lex);

// Mean word probability per signal group (absent words count as 0),
// renormalized to sum to 1. An all-zero input yields the uniform distribution
// over the lexicon's signals.
// Throws EmptyLexicon; InvalidArgument for entries outside [0,1].
SignalDistribution group_mean(const WordDistribution& wd, const SignalLexicon& lex);

// Highest-probability signal; ties go to the earlier signal in inventory order.
std::optional<Signal> argmax(const SignalDistribution& dist);

// (dialogue id, utterance, start, end)
using EduKey = std::tuple<std::string, int, int, int>;

// Where EDU signals come from: lexicon lookup, or externally computed
// distributions (one per EDU). An EDU missing from the distribution table has
// no detected signal.
class SignalSource {
 public:
  static SignalSource from_lexicon(SignalLexicon lex);
  static SignalSource from_distributions(std::map<EduKey, SignalDistribution> table);

  std::optional<Signal> detect(std::string_view dialogue_id, const Utterance& u,
                               const EduSpan& edu) const;

 private:
  SignalSource() = default;

  std::optional<SignalLexicon> lexicon_;
  std::map<EduKey, SignalDistribution> table_;
};

inline constexpr Label kFallbackSignal = Label::Elbr;

// Detected signal per EDU (before fallback), parallel to `edus`.
// Throws UncoveredToken if `edus` does not partition the utterance.
std::vector<std::optional<Signal>> detect_edu_signals(std::string_view dialogue_id,
                                                      const Utterance& u,
                                                      std::span<const EduSpan> edus,
                                                      const SignalSource& source);

// Per-token signal sequence: each token takes its EDU's signal; EDUs without
// one take `fallback`. Throws UncoveredToken.
std::vector<Signal> signals_for_utterance(std::string_view dialogue_id, const Utterance& u,
                                          std::span<const EduSpan> edus,
                                          const SignalSource& source,
                                          Label fallback = kFallbackSignal);

// Expansion of per-EDU signals to tokens. `edus` must partition 1..n.
// Throws LengthMismatch, UncoveredToken.
std::vector<Signal> expand_signals(std::span<const EduSpan> edus,
                                   std::span<const std::optional<Signal>> edu_signals, int n,
                                   Label fallback = kFallbackSignal);

}  // namespace dialdep
