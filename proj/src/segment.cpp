#include "dialdep/segment.hpp"

#include <cstdlib>

namespace dialdep {

void SegmenterConfig::validate() const {
  if (punctuation.empty()) throw InvalidArgument("segmenter punctuation set is empty");
  if (implicit_min_span < 1) throw InvalidArgument("implicit_min_span must be >= 1");
  if (!utterance_boundaries) {
    throw InvalidArgument("utterance boundaries always split EDUs; cannot disable");
  }
  for (Label l : implicit_labels) {
    if (!is_syntactic(l)) {
      throw InvalidArgument("implicit boundary label '" + std::string(label_name(l)) +
                            "' is not syntactic");
    }
  }
}

namespace {

// boundary[b] == true places a split between token b and b+1.
std::vector<EduSpan> spans_from_boundaries(int utterance, const std::vector<bool>& boundary) {
  const int n = static_cast<int>(boundary.size()) - 1;
  std::vector<EduSpan> spans;
  int start = 1;
  for (int b = 1; b < n; ++b) {
    if (boundary[static_cast<std::size_t>(b)]) {
      spans.push_back({utterance, start, b});
      start = b + 1;
    }
  }
  if (n >= 1) spans.push_back({utterance, start, n});
  return spans;
}

std::vector<bool> punctuation_boundaries(const Utterance& u, const SegmenterConfig& cfg) {
  const int n = static_cast<int>(u.size());
  std::vector<bool> boundary(static_cast<std::size_t>(n) + 1, false);
  for (int i = 1; i < n; ++i) {
    if (cfg.punctuation.count(u.tokens[static_cast<std::size_t>(i - 1)].form)) {
      boundary[static_cast<std::size_t>(i)] = true;
    }
  }
  return boundary;
}

}  // namespace

std::vector<EduSpan> segment(const Utterance& u, const SegmenterConfig& cfg) {
  return spans_from_boundaries(u.index, punctuation_boundaries(u, cfg));
}

std::vector<EduSpan> segment(const Utterance& u, const DependencyInstance& deps,
                             const SegmenterConfig& cfg) {
  if (deps.size() != u.size() || deps.labels.size() != u.size()) {
    throw LengthMismatch("dependency instance has " + std::to_string(deps.size()) +
                         " positions, utterance has " + std::to_string(u.size()));
  }
  auto boundary = punctuation_boundaries(u, cfg);
  const int n = static_cast<int>(u.size());
  for (int i = 1; i <= n; ++i) {
    const int h = deps.head(i);
    if (h <= 0 || h > n || !cfg.implicit_labels.count(deps.label(i))) continue;
    if (std::abs(i - h) < cfg.implicit_min_span) continue;
    // split immediately before the endpoint with the larger index
    boundary[static_cast<std::size_t>(std::max(i, h) - 1)] = true;
  }
  return spans_from_boundaries(u.index, boundary);
}

std::vector<int> edu_membership(std::span<const EduSpan> spans, int n) {
  std::vector<int> of(static_cast<std::size_t>(n) + 1, -1);
  for (std::size_t k = 0; k < spans.size(); ++k) {
    for (int t = std::max(1, spans[k].start); t <= std::min(n, spans[k].end); ++t) {
      of[static_cast<std::size_t>(t)] = static_cast<int>(k);
    }
  }
  return of;
}

bool partitions(std::span<const EduSpan> spans, int n) {
  int next = 1;
  for (const auto& s : spans) {
    if (s.start != next || s.end < s.start || s.end > n) return false;
    next = s.end + 1;
  }
  return next == n + 1;
}

double F1Counts::precision() const {
  return predicted == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(predicted);
}

double F1Counts::recall() const {
  return gold == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(gold);
}

std::optional<double> F1Counts::f1() const {
  if (predicted + gold == 0) return std::nullopt;
  return 2.0 * static_cast<double>(matched) / static_cast<double>(predicted + gold);
}

SegmentationScores segmentation_f1(std::span<const std::vector<EduSpan>> pred,
                                   std::span<const std::vector<EduSpan>> gold) {
  if (pred.size() != gold.size()) {
    throw CorpusMismatch("segmentation corpora differ in size: " + std::to_string(pred.size()) +
                         " vs " + std::to_string(gold.size()));
  }
  SegmentationScores scores;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto& p = pred[k];
    const auto& g = gold[k];
    if (!p.empty() && !g.empty() && p.front().utterance != g.front().utterance) {
      throw CorpusMismatch("utterance " + std::to_string(g.front().utterance) +
                           " paired with predicted utterance " +
                           std::to_string(p.front().utterance));
    }
    std::size_t matched = 0;
    for (const auto& s : p) {
      for (const auto& t : g) {
        if (s.start == t.start && s.end == t.end) {
          ++matched;
          break;
        }
      }
    }
    auto& bucket = g.size() > 1 ? scores.multi : scores.single;
    for (F1Counts* c : {&scores.overall, &bucket}) {
      c->matched += matched;
      c->predicted += p.size();
      c->gold += g.size();
    }
  }
  return scores;
}

}  // namespace dialdep
