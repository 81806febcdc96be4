#pragma once

#include <compare>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dialdep/labels.hpp"
#include "dialdep/treebank.hpp"

namespace dialdep {

// Contiguous 1-based inclusive token range of one utterance.
struct EduSpan {
  int utterance = 0;
  int start = 1;
  int end = 1;

  bool contains(int token) const { return token >= start && token <= end; }
  int size() const { return end - start + 1; }

  friend bool operator==(const EduSpan&, const EduSpan&) = default;
  friend auto operator<=>(const EduSpan&, const EduSpan&) = default;
};

struct SegmenterConfig {
  // Token forms after which a boundary is placed.
  std::set<std::string> punctuation{"，", "。", "？", "！", "；"};
  // Arcs with these labels split head from dependent when deps are supplied.
  std::set<Label> implicit_labels{Label::Sasubj, Label::Dfsubj};
  int implicit_min_span = 2;
  // EDUs never cross utterances in this data model; kept for config
  // compatibility and must stay true.
  bool utterance_boundaries = true;

  // Throws InvalidArgument.
  void validate() const;
};

std::vector<EduSpan> segment(const Utterance& u, const SegmenterConfig& cfg);
// Throws LengthMismatch when deps.size() != u.size().
std::vector<EduSpan> segment(const Utterance& u, const DependencyInstance& deps,
                             const SegmenterConfig& cfg);

// EDU ordinal of each token (index 0 unused); -1 marks a token no span covers.
std::vector<int> edu_membership(std::span<const EduSpan> spans, int n);

// True iff spans are non-overlapping and cover 1..n in order.
bool partitions(std::span<const EduSpan> spans, int n);

struct F1Counts {
  std::size_t matched = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;

  double precision() const;
  double recall() const;
  // nullopt when both sides are empty.
  std::optional<double> f1() const;
};

struct SegmentationScores {
  F1Counts overall;
  F1Counts multi;   // utterances whose gold segmentation has more than one EDU
  F1Counts single;  // utterances whose gold segmentation has exactly one EDU
};

// Exact-span F1. pred[k] and gold[k] segment the same utterance.
// Throws CorpusMismatch when the utterance inventories differ.
SegmentationScores segmentation_f1(std::span<const std::vector<EduSpan>> pred,
                                   std::span<const std::vector<EduSpan>> gold);

}  // namespace dialdep
