#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialdep/labels.hpp"
#include "dialdep/segment.hpp"
#include "dialdep/signal.hpp"
#include "dialdep/treebank.hpp"

namespace dialdep {

// Label given to the tail of a reversed arc.
enum class TailLabel {
  Signal,  // the reversing token's signal
  Keep,    // whatever the tail's own relabel produced
};

struct TransformConfig {
  // Syntactic labels eligible for conversion when their arc spans min_span.
  std::set<Label> transforming{Label::Root, Label::Sasubj, Label::Dfsubj};
  int min_span = 2;
  // Signals whose arcs are reversed toward the tail.
  std::set<Label> reversal{Label::Cond, Label::Attr};
  std::string greeting_name{Signal::kGreetingName};
  TailLabel tail_label = TailLabel::Signal;
  // Arc label used for a relabel driven by the greeting pseudo-signal.
  Label greeting_label = Label::Elbr;
  // Inter-utterance link label when the upper root's EDU has no signal.
  Label link_fallback = Label::StmRsp;

  // Throws InvalidArgument.
  void validate() const;
};

enum class Rule {
  Relabel,   // label replaced by the position's signal
  Reverse,   // arc to the tail reversed
  Greeting,  // root moved out of the greeting EDU
  NoTail,    // reversal or greeting found no tail; skipped
  Conflict,  // reversal or greeting skipped, a token was already rewritten
};

std::string_view rule_name(Rule r);

struct TransformEvent {
  int utterance = 0;
  int token = 0;
  Rule rule = Rule::Relabel;
  int tail = 0;  // 0 when no tail is involved
  int old_head = 0;
  int new_head = 0;
  Label old_label = Label::Root;
  Label new_label = Label::Root;
};

struct TransformLog {
  std::string dialogue;
  std::vector<TransformEvent> events;

  std::size_t count(Rule r) const;
};

// Smallest-index token in another EDU whose head is `i`. Tokens outside every
// span never qualify.
std::optional<int> find_tail(const DependencyInstance& inst, std::span<const EduSpan> edus,
                             int i);

// Positions (1-based; index 0 unused) where the relabel condition holds: the
// head lies outside the token's EDU (head 0 included), or the label is a
// transforming label whose arc spans at least min_span tokens.
std::vector<bool> relabel_mask(const DependencyInstance& inst, std::span<const EduSpan> edus,
                               const TransformConfig& cfg);

struct PostTranResult {
  DependencyInstance instance;
  std::vector<TransformEvent> events;
};

// Signal-based rewrite of one utterance's predicted arcs. All conditions are
// evaluated against the input arcs, so the result does not depend on the
// order positions are visited. A reversal or greeting move touching a token
// already rewritten by an earlier one is skipped and logged as Conflict.
//
// Throws LengthMismatch (|signals| != n), UncoveredToken (edus do not
// partition), BrokenTree (input or output is not a tree).
PostTranResult posttran(const DependencyInstance& inst, std::span<const EduSpan> edus,
                        std::span<const Signal> signals, const TransformConfig& cfg,
                        int utterance = 0);

struct UtteranceTransform {
  Utterance utterance;
  std::vector<EduSpan> edus;
  std::vector<std::optional<Signal>> edu_signals;
  std::vector<Signal> signals;
  std::vector<TransformEvent> events;

  // Detected signal of the EDU holding the (rewritten) root, if any.
  std::optional<Signal> root_signal() const;
};

// Segment (using the utterance's own arcs for implicit boundaries), detect
// signals, then rewrite. Used for treebank sentences and for parser output
// alike.
UtteranceTransform pretran(std::string_view dialogue_id, const Utterance& u,
                           const SignalSource& source, const SegmenterConfig& seg,
                           const TransformConfig& cfg);

// Chain the utterance roots: utterance u-1's root heads utterance u's root.
// The label is the relation signal of the upper root's EDU, or
// cfg.link_fallback when there is none (or it is the greeting pseudo-signal).
// Throws MissingRoot, LengthMismatch (root_signals.size() != #utterances).
std::vector<InterUtteranceLink> link_utterances(
    const Dialogue& d, std::span<const std::optional<Signal>> root_signals,
    const TransformConfig& cfg);

enum class TransformMode {
  Pre,   // rewrite each utterance; existing link tails follow moved roots
  Post,  // rewrite each utterance, then replace links by the root chain
};

struct DialogueTransform {
  Dialogue dialogue;
  TransformLog log;
};

DialogueTransform transform_dialogue(const Dialogue& d, const SignalSource& source,
                                     const SegmenterConfig& seg, const TransformConfig& cfg,
                                     TransformMode mode);

}  // namespace dialdep
