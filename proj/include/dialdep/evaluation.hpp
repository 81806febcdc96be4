#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dialdep/segment.hpp"
#include "dialdep/signal.hpp"
#include "dialdep/treebank.hpp"

namespace dialdep {

struct AttachmentCounts {
  std::size_t total = 0;
  std::size_t head_correct = 0;
  std::size_t both_correct = 0;

  // nullopt on an empty denominator
  std::optional<double> uas() const;
  std::optional<double> las() const;

  AttachmentCounts& operator+=(const AttachmentCounts& o);
  friend bool operator==(const AttachmentCounts&, const AttachmentCounts&) = default;
};

// Scores on the dialogue-level tree. "inner" and "inter" partition tokens by
// the family of their gold label, inter-utterance links included.
struct AttachmentScores {
  AttachmentCounts inner;
  AttachmentCounts inter;
  AttachmentCounts overall;
  std::map<Label, AttachmentCounts> by_label;  // keyed by gold label
};

// pred[k] and gold[k] must share the dialogue id and utterance lengths.
// Throws CorpusMismatch, InvalidDialogue.
AttachmentScores attachment_scores(std::span<const Dialogue> pred, std::span<const Dialogue> gold);

// Relabel every predicted arc carrying `syntactic` (utterance-local label) as
// `inter_edu`, then LAS over gold arcs labeled `inter_edu`. nullopt when gold
// has no such arc. Throws InvalidArgument on wrong label families,
// CorpusMismatch.
std::optional<double> matching_score(std::span<const Dialogue> pred,
                                     std::span<const Dialogue> gold, Label syntactic,
                                     Label inter_edu);

// Matching score of `syntactic` against every inter-EDU label that occurs in
// gold, best first (ties in inventory order), truncated to `top`.
std::vector<std::pair<Label, double>> matching_ranking(std::span<const Dialogue> pred,
                                                       std::span<const Dialogue> gold,
                                                       Label syntactic, std::size_t top);

struct SignalMatch {
  std::size_t arcs = 0;
  std::size_t matched = 0;

  double accuracy() const {
    return arcs == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(arcs);
  }
};

// For each inter-EDU label: the share of gold arcs with that label whose
// dependent's EDU (segmented with the gold arcs) holds a lexicon word mapping
// to the same label.
std::map<Label, SignalMatch> signal_matching(std::span<const Dialogue> gold,
                                             const SignalLexicon& lex,
                                             const SegmenterConfig& seg);

}  // namespace dialdep
