#include "dialdep/selection.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace dialdep {

using ojson = nlohmann::ordered_json;

std::string_view view_name(View v) { return v == View::ParserS ? "parser-S" : "parser-T"; }

std::optional<View> parse_view(std::string_view name) {
  if (name == "parser-S") return View::ParserS;
  if (name == "parser-T") return View::ParserT;
  return std::nullopt;
}

namespace {

double mean_row_max(const Matrix& m) {
  if (m.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& row : m) sum += *std::max_element(row.begin(), row.end());
  return sum / static_cast<double>(m.size());
}

std::string annotation(const Utterance& u) {
  std::string s;
  for (const auto& t : u.tokens) {
    s += t.form;
    s += '\t';
    s += std::to_string(t.head);
    s += '\t';
    s += label_name(t.label);
    s += '\n';
  }
  return s;
}

}  // namespace

Confidence confidence(const ScoreRecord& rec) {
  check_score_record(rec);
  return {mean_row_max(rec.arc), mean_row_max(rec.label)};
}

DependencyInstance PseudoSample::instance() const {
  auto inst = DependencyInstance::from_utterance(utterance);
  inst.confidence = confidence;
  return inst;
}

std::vector<PseudoSample> make_samples(std::span<const Dialogue> predictions,
                                       std::span<const ScoreRecord> scores, View view) {
  std::map<std::pair<std::string, int>, const ScoreRecord*> by_key;
  for (const auto& r : scores) by_key[{r.dialogue, r.utterance}] = &r;

  std::vector<PseudoSample> out;
  for (const auto& d : predictions) {
    for (const auto& u : d.utterances) {
      auto it = by_key.find({d.id, u.index});
      if (it == by_key.end()) {
        throw InvalidArgument("no score record for dialogue '" + d.id + "' utterance " +
                              std::to_string(u.index));
      }
      const ScoreRecord& rec = *it->second;
      if (rec.size() != u.size()) {
        throw LengthMismatch("score record for '" + d.id + "' utterance " +
                             std::to_string(u.index) + " has " + std::to_string(rec.size()) +
                             " rows, utterance has " + std::to_string(u.size()) + " tokens");
      }
      out.push_back({d.id, u, view, confidence(rec)});
    }
  }
  return out;
}

std::vector<PseudoSample> filter(std::span<const PseudoSample> samples, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw InvalidArgument("confidence threshold must lie in [0,1]");
  }
  std::vector<PseudoSample> kept;
  for (const auto& s : samples) {
    if (s.confidence.arc > epsilon && s.confidence.label > epsilon) kept.push_back(s);
  }
  return kept;
}

double confidence_magnitude(const Confidence& c, DedupScore how) {
  return how == DedupScore::Min ? std::min(c.arc, c.label) : 0.5 * (c.arc + c.label);
}

std::optional<DedupScore> parse_dedup(std::string_view name) {
  if (name == "min") return DedupScore::Min;
  if (name == "mean") return DedupScore::Mean;
  return std::nullopt;
}

std::vector<PseudoSample> merge_multiview(std::span<const PseudoSample> a,
                                          std::span<const PseudoSample> b, DedupScore how) {
  // true when x should replace the incumbent y
  auto better = [how](const PseudoSample& x, const PseudoSample& y) {
    const double mx = confidence_magnitude(x.confidence, how);
    const double my = confidence_magnitude(y.confidence, how);
    if (mx != my) return mx > my;
    if (x.view != y.view) return x.view == View::ParserT;
    return annotation(x.utterance) < annotation(y.utterance);
  };
  std::map<std::pair<std::string, int>, PseudoSample> merged;
  for (auto side : {a, b}) {
    for (const auto& s : side) {
      auto [it, inserted] = merged.try_emplace(s.key(), s);
      if (!inserted && better(s, it->second)) it->second = s;
    }
  }
  std::vector<PseudoSample> out;
  out.reserve(merged.size());
  for (auto& [k, s] : merged) out.push_back(std::move(s));
  return out;
}

std::vector<SweepRow> threshold_sweep(std::span<const PseudoSample> samples,
                                      std::vector<double> epsilons, DedupScore how) {
  std::sort(epsilons.begin(), epsilons.end());
  std::vector<PseudoSample> s_view, t_view;
  for (const auto& s : samples) (s.view == View::ParserS ? s_view : t_view).push_back(s);

  std::vector<SweepRow> rows;
  for (double eps : epsilons) {
    auto ks = filter(s_view, eps);
    auto kt = filter(t_view, eps);
    rows.push_back({eps, ks.size(), kt.size(), merge_multiview(ks, kt, how).size()});
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::vector<PseudoSample> read_samples(std::string_view document) {
  std::vector<PseudoSample> out;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos < document.size()) {
    std::size_t nl = document.find('\n', pos);
    if (nl == std::string_view::npos) nl = document.size();
    std::string_view text = document.substr(pos, nl - pos);
    pos = nl + 1;
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      auto j = ojson::parse(text);
      PseudoSample s;
      s.dialogue = j.at("dialog").get<std::string>();
      s.utterance.index = j.at("utt").get<int>();
      auto view = parse_view(j.at("view").get<std::string>());
      if (!view) throw FormatError(line, "unknown view '" + j["view"].get<std::string>() + "'");
      s.view = *view;
      s.confidence = {j.at("c_arc").get<double>(), j.at("c_label").get<double>()};
      if (j.contains("speaker")) s.utterance.speaker = j["speaker"].get<std::string>();
      int idx = 0;
      for (const auto& t : j.at("tokens")) {
        if (!t.is_array() || t.size() != 3) throw FormatError(line, "token must be [form, head, label]");
        const auto name = t[2].get<std::string>();
        auto label = parse_label(name);
        if (!label) throw UnknownLabel(line, name);
        s.utterance.tokens.push_back({++idx, t[0].get<std::string>(), t[1].get<int>(), *label});
      }
      auto problems = validate_instance(s.instance());
      if (!problems.empty()) {
        throw FormatError(line, "sample arcs are not a tree (" +
                                    std::string(violation_name(problems.front().kind)) + ")");
      }
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(line, e.what());
    }
  }
  return out;
}

std::string write_samples(std::span<const PseudoSample> samples) {
  std::string out;
  for (const auto& s : samples) {
    ojson j;
    j["dialog"] = s.dialogue;
    j["utt"] = s.utterance.index;
    j["view"] = view_name(s.view);
    j["c_arc"] = round_to_precision(s.confidence.arc);
    j["c_label"] = round_to_precision(s.confidence.label);
    j["speaker"] = s.utterance.speaker;
    ojson toks = ojson::array();
    for (const auto& t : s.utterance.tokens) {
      toks.push_back(ojson::array({t.form, t.head, std::string(label_name(t.label))}));
    }
    j["tokens"] = std::move(toks);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Dialogue> samples_to_corpus(std::span<const PseudoSample> samples) {
  std::vector<Dialogue> out;
  for (const auto& s : samples) {
    Utterance u = s.utterance;
    u.index = 0;
    out.push_back(Dialogue{s.dialogue + "/" + std::to_string(s.utterance.index), {std::move(u)}, {}});
  }
  return out;
}

}  // namespace dialdep
