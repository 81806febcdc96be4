#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dialdep/error.hpp"
#include "dialdep/labels.hpp"

namespace dialdep {

// Heads are utterance-local: 0 is the utterance's dummy root, otherwise the
// 1-based index of another token in the same utterance.
struct Token {
  int index = 0;
  std::string form;
  int head = 0;
  Label label = Label::Root;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Utterance {
  int index = 0;
  std::string speaker;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  // Index of the first token attached to the dummy root.
  std::optional<int> root() const;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

// (utterance index, 1-based token index)
struct Coord {
  int utterance = 0;
  int token = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

struct InterUtteranceLink {
  Coord head;
  Coord tail;
  Label label = Label::StmRsp;

  friend bool operator==(const InterUtteranceLink&, const InterUtteranceLink&) = default;
};

struct Dialogue {
  std::string id;
  std::vector<Utterance> utterances;
  std::vector<InterUtteranceLink> links;

  std::size_t token_count() const;
  // The link whose tail lies in utterance `u`, if any.
  const InterUtteranceLink* link_into(int u) const;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

struct Confidence {
  double arc = 0.0;
  double label = 0.0;

  friend bool operator==(const Confidence&, const Confidence&) = default;
};

// Parser output for one utterance: head vector and label vector, indexed by
// token position - 1. Confidence is present only for pseudo-labeled data.
struct DependencyInstance {
  std::vector<int> heads;
  std::vector<Label> labels;
  std::optional<Confidence> confidence;

  static DependencyInstance from_utterance(const Utterance& u);

  std::size_t size() const { return heads.size(); }
  int head(int token) const { return heads[static_cast<std::size_t>(token - 1)]; }
  Label label(int token) const { return labels[static_cast<std::size_t>(token - 1)]; }

  friend bool operator==(const DependencyInstance&, const DependencyInstance&) = default;
};

// Copy of `u` with heads and labels taken from `inst`.
// Throws LengthMismatch when sizes differ.
Utterance apply_instance(const Utterance& u, const DependencyInstance& inst);

enum class ViolationKind {
  EmptyDialogue,
  UtteranceIndex,
  EmptyUtterance,
  TokenIndex,
  HeadOutOfRange,
  SelfLoop,
  NoRoot,
  MultipleRoots,
  Cycle,
  LinkOutOfRange,
  LinkDirection,
  LinkTailNotRoot,
  LinkLabelFamily,
  UnlinkedUtterance,
  MultiplyLinked,
};

std::string_view violation_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  int utterance = -1;  // -1 when not tied to an utterance
  int token = 0;       // 0 when not tied to a token
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool contains(ViolationKind k) const;
  std::string to_string() const;
};

// Whether every non-first utterance must be the tail of a link. Utterance-level
// corpora (parser output, sentence treebanks) carry no link layer.
enum class LinkPolicy { Required, Optional };

ValidationReport validate_dialogue(const Dialogue& d, LinkPolicy policy = LinkPolicy::Required);

// Local tree check on a bare instance: heads in range, no self-loop, exactly one
// root, acyclic. Violations carry utterance -1.
std::vector<Violation> validate_instance(const DependencyInstance& inst);

class ValidationError : public Error {
 public:
  ValidationError(std::string dialogue_id, ValidationReport report);

  const std::string& dialogue_id() const { return id_; }
  const ValidationReport& report() const { return report_; }

 private:
  std::string id_;
  ValidationReport report_;
};

// One node of the dialogue-level tree. Global indices run 1..N in reading
// order; head 0 is the single global root.
struct GlobalArc {
  int index = 0;
  int head = 0;
  Label label = Label::Root;

  friend bool operator==(const GlobalArc&, const GlobalArc&) = default;
};

// Throws InvalidDialogue if validate_dialogue(d) is not empty.
std::vector<GlobalArc> to_global_tree(const Dialogue& d);

// Per-label counts in the dual-layer view: every token contributes its
// utterance-local label (so each utterance root counts once as its local label,
// normally "root"), and every inter-utterance link contributes its label.
struct CorpusStats {
  std::map<Label, std::size_t> counts;
  std::size_t inner = 0;
  std::size_t inter = 0;
  std::size_t dialogues = 0;
  std::size_t utterances = 0;
  std::size_t tokens = 0;

  double avg_turns() const;
  double avg_words() const;
  std::size_t count(Label l) const;
};

// Throws InvalidDialogue for any invalid member.
CorpusStats count_labels(std::span<const Dialogue> corpus,
                         LinkPolicy policy = LinkPolicy::Required);

}  // namespace dialdep
