#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialdep/io.hpp"
#include "dialdep/treebank.hpp"

namespace dialdep {

// Which parser produced a pseudo-labeled sample: trained on the syntactic
// treebank (parser-S) or on the transformed one (parser-T).
enum class View { ParserS, ParserT };

std::string_view view_name(View v);
std::optional<View> parse_view(std::string_view name);

// Mean over positions of the highest arc probability, and likewise for labels.
// Throws RowNotStochastic, InvalidArgument (shape).
Confidence confidence(const ScoreRecord& rec);

struct PseudoSample {
  std::string dialogue;
  Utterance utterance;  // predicted tree; utterance.index is the key
  View view = View::ParserS;
  Confidence confidence;

  std::pair<std::string, int> key() const { return {dialogue, utterance.index}; }
  DependencyInstance instance() const;

  friend bool operator==(const PseudoSample&, const PseudoSample&) = default;
};

// Pairs each utterance of the (utterance-level) prediction corpus with its
// score record. Throws LengthMismatch, InvalidArgument (missing record).
std::vector<PseudoSample> make_samples(std::span<const Dialogue> predictions,
                                       std::span<const ScoreRecord> scores, View view);

// Keep iff c_arc > epsilon and c_label > epsilon. Throws InvalidArgument
// unless 0 <= epsilon <= 1.
std::vector<PseudoSample> filter(std::span<const PseudoSample> samples, double epsilon);

// Scalar compared when the two views produced the same key.
enum class DedupScore { Min, Mean };

double confidence_magnitude(const Confidence& c, DedupScore how);
std::optional<DedupScore> parse_dedup(std::string_view name);

// Union keyed by (dialogue, utterance). On collision the higher magnitude
// wins; ties go to parser-T, then to the lexicographically smaller annotation.
// Output is sorted by key.
std::vector<PseudoSample> merge_multiview(std::span<const PseudoSample> a,
                                          std::span<const PseudoSample> b,
                                          DedupScore how = DedupScore::Min);

struct SweepRow {
  double epsilon = 0.0;
  std::size_t kept_s = 0;
  std::size_t kept_t = 0;
  std::size_t merged = 0;
};

// Kept counts per view and after merging, for each threshold (ascending).
std::vector<SweepRow> threshold_sweep(std::span<const PseudoSample> samples,
                                      std::vector<double> epsilons,
                                      DedupScore how = DedupScore::Min);

// Sample files: JSON lines {"dialog","utt","view","c_arc","c_label","speaker",
// "tokens": [[form, head, label], ...]}.
std::vector<PseudoSample> read_samples(std::string_view document);
std::string write_samples(std::span<const PseudoSample> samples);

// One single-utterance dialogue per sample, id "<dialog>/<utt>".
std::vector<Dialogue> samples_to_corpus(std::span<const PseudoSample> samples);

}  // namespace dialdep
