#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialdep/segment.hpp"
#include "dialdep/signal.hpp"
#include "dialdep/treebank.hpp"

namespace dialdep {

// ---------------------------------------------------------------------------
// Dialogue treebank format
//
//   # dialog = <id>
//   # utt = <index>
//   # speaker = <speaker>
//   IDX <tab> FORM <tab> HEAD <tab> DEPREL <tab> GHEAD <tab> GREL
//   ...
//   <blank line ends the utterance>
//
// GHEAD is "u:t" (head utterance:token of the inter-utterance link) and GREL
// its label. Both are "_" except on the root token of a linked utterance.
// See docs/FORMATS.md.
// ---------------------------------------------------------------------------

// Throws FormatError, UnknownLabel, ValidationError.
std::vector<Dialogue> read_dialogues(std::string_view document,
                                     LinkPolicy policy = LinkPolicy::Required);
// Throws InvalidDialogue if a link cannot be encoded (tail not a root token),
// InvalidArgument for ids, speakers or forms containing tabs or newlines.
std::string write_dialogues(std::span<const Dialogue> dialogues);

// ---------------------------------------------------------------------------
// Scorer output (JSON lines, one record per utterance)
// ---------------------------------------------------------------------------

using Matrix = std::vector<std::vector<double>>;

// arc: n x (n+1), column 0 is the dummy root; label: n x kLabelCount in
// inventory order. Rows are probability distributions.
struct ScoreRecord {
  std::string dialogue;
  int utterance = 0;
  Matrix arc;
  Matrix label;

  std::size_t size() const { return arc.size(); }

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

inline constexpr double kStochasticTolerance = 1e-6;

// Shape and row-stochastic checks. Throws RowNotStochastic, InvalidArgument.
void check_score_record(const ScoreRecord& rec);

std::vector<ScoreRecord> read_scores(std::string_view document);
std::string write_scores(std::span<const ScoreRecord> records);

// ---------------------------------------------------------------------------
// Signal lexicon (TSV: word <tab> signal; '#' comments and blank lines skipped)
// ---------------------------------------------------------------------------

SignalLexicon read_lexicon(std::string_view document,
                           std::string_view greeting_name = Signal::kGreetingName);
std::string write_lexicon(const SignalLexicon& lex);

// ---------------------------------------------------------------------------
// Per-EDU signal distributions (JSON lines). A record carries either an
// already grouped distribution over signals ("signals", must sum to 1) or the
// raw word distribution at the masked positions ("words"), which is grouped
// with the lexicon on load.
// ---------------------------------------------------------------------------

struct SignalDistributionRecord {
  std::string dialogue;
  EduSpan span;
  std::optional<SignalDistribution> signals;
  std::optional<WordDistribution> words;

  friend bool operator==(const SignalDistributionRecord&,
                         const SignalDistributionRecord&) = default;
};

std::vector<SignalDistributionRecord> read_signal_distributions(std::string_view document);
std::string write_signal_distributions(std::span<const SignalDistributionRecord> records);

// Groups word records with `lex` (group_mean); signal records pass through.
std::map<EduKey, SignalDistribution> distribution_table(
    std::span<const SignalDistributionRecord> records, const SignalLexicon* lex);

// ---------------------------------------------------------------------------
// EDU span files (JSON lines: {"dialog", "utt", "edus": [[start, end], ...]})
// ---------------------------------------------------------------------------

struct UtteranceSegmentation {
  std::string dialogue;
  int utterance = 0;
  std::vector<EduSpan> edus;

  friend bool operator==(const UtteranceSegmentation&, const UtteranceSegmentation&) = default;
};

std::vector<UtteranceSegmentation> read_segmentations(std::string_view document);
std::string write_segmentations(std::span<const UtteranceSegmentation> segs);

// ---------------------------------------------------------------------------

// Round to 9 significant digits, the precision every writer emits.
double round_to_precision(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace dialdep
