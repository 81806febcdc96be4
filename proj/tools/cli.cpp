#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dialdep/config.hpp"
#include "dialdep/evaluation.hpp"
#include "dialdep/io.hpp"
#include "dialdep/segment.hpp"
#include "dialdep/selection.hpp"
#include "dialdep/signal.hpp"
#include "dialdep/transform.hpp"
#include "dialdep/treebank.hpp"

namespace dialdep::cli {

namespace {

using Json = nlohmann::ordered_json;

// Bad option values discovered after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 42;
  double epsilon = 0.98;
  int k = 2;
  int iterations = 1;
  int jobs = 1;
  std::string config;
  std::string links = "required";
  bool verbose = false;
};

struct Context {
  PipelineConfig cfg;
  LinkPolicy policy = LinkPolicy::Required;
  int jobs = 1;
  bool verbose = false;
  std::ostream& out;
  std::ostream& err;
};

// Evaluates fn(0..n-1) on up to `jobs` threads; results keep input order and
// the lowest-index failure is rethrown.
template <typename F>
auto parallel_map(std::size_t n, int jobs, F fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Data errors carry the file they came from.
template <typename F>
auto load(const std::string& path, F parse) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ValidationError& e) {
    throw Error(path + ": dialogue '" + e.dialogue_id() + "': " + e.report().to_string());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::vector<Dialogue> load_corpus(const std::string& path, LinkPolicy policy) {
  return load(path, [&](const std::string& t) { return read_dialogues(t, policy); });
}

SignalLexicon load_lexicon(const std::string& path, const TransformConfig& cfg) {
  return load(path, [&](const std::string& t) { return read_lexicon(t, cfg.greeting_name); });
}

void emit(const Context& ctx, const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    ctx.out << content;
  } else {
    write_file(path, content);
  }
}

Json number(double v) { return round_to_precision(v); }

Json optional_number(std::optional<double> v) {
  return v ? number(*v) : Json(nullptr);
}

std::set<Label> parse_label_list(const std::vector<std::string>& names, const char* flag) {
  std::set<Label> out;
  for (const auto& n : names) {
    auto l = parse_label(n);
    if (!l) throw UsageError(std::string(flag) + ": unknown label '" + n + "'");
    out.insert(*l);
  }
  return out;
}

Label parse_one_label(const std::string& name, const char* flag) {
  auto l = parse_label(name);
  if (!l) throw UsageError(std::string(flag) + ": unknown label '" + name + "'");
  return *l;
}

// --lexicon and/or --signals. With --signals, the lexicon only groups word
// distributions.
SignalSource make_source(const Context& ctx, const std::string& lexicon_path,
                         const std::string& signals_path) {
  std::optional<SignalLexicon> lex;
  if (!lexicon_path.empty()) lex = load_lexicon(lexicon_path, ctx.cfg.transform);
  if (!signals_path.empty()) {
    auto table = load(signals_path, [&](const std::string& t) {
      auto recs = read_signal_distributions(t);
      return distribution_table(recs, lex ? &*lex : nullptr);
    });
    return SignalSource::from_distributions(std::move(table));
  }
  if (!lex) throw UsageError("one of --lexicon or --signals is required");
  return SignalSource::from_lexicon(std::move(*lex));
}

std::vector<EduSpan> segment_with(const Utterance& u, bool use_deps, const SegmenterConfig& cfg) {
  return use_deps ? segment(u, DependencyInstance::from_utterance(u), cfg) : segment(u, cfg);
}

Json counts_json(const AttachmentCounts& c) {
  Json j;
  j["total"] = c.total;
  j["uas"] = optional_number(c.uas());
  j["las"] = optional_number(c.las());
  return j;
}

Json f1_json(const F1Counts& c) {
  Json j;
  j["matched"] = c.matched;
  j["predicted"] = c.predicted;
  j["gold"] = c.gold;
  j["precision"] = number(c.precision());
  j["recall"] = number(c.recall());
  j["f1"] = optional_number(c.f1());
  return j;
}

std::string percent(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v * 100.0);
  return buf;
}

std::string report_line(const std::string& name, const AttachmentCounts& c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s %8zu %8s %8s\n", name.c_str(), c.total,
                percent(c.uas()).c_str(), percent(c.las()).c_str());
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Context& ctx, const std::string& path) {
  auto corpus = load_corpus(path, ctx.policy);
  if (ctx.verbose) {
    ctx.err << path << ": " << corpus.size() << " dialogues valid\n";
  }
  ctx.out << "OK\n";
  return kExitOk;
}

int cmd_stats(const Context& ctx, const std::string& path) {
  auto corpus = load_corpus(path, ctx.policy);
  CorpusStats s = count_labels(corpus, ctx.policy);
  Json j;
  j["dialogues"] = s.dialogues;
  j["utterances"] = s.utterances;
  j["tokens"] = s.tokens;
  j["avg_turns"] = number(s.avg_turns());
  j["avg_words"] = number(s.avg_words());
  j["inner"] = s.inner;
  j["inter"] = s.inter;
  Json counts = Json::object();
  for (Label l : all_labels()) counts[std::string(label_name(l))] = s.count(l);
  j["counts"] = counts;
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

struct SegmentArgs {
  std::string input;
  std::string gold;
  std::string out;
  bool punct_only = false;
};

int cmd_segment(const Context& ctx, const SegmentArgs& a) {
  auto corpus = load_corpus(a.input, ctx.policy);
  const auto& cfg = ctx.cfg.segment;
  auto per_dialogue = parallel_map(corpus.size(), ctx.jobs, [&](std::size_t i) {
    std::vector<UtteranceSegmentation> segs;
    for (const auto& u : corpus[i].utterances) {
      segs.push_back({corpus[i].id, u.index, segment_with(u, !a.punct_only, cfg)});
    }
    return segs;
  });
  std::vector<UtteranceSegmentation> segs;
  for (auto& v : per_dialogue) segs.insert(segs.end(), v.begin(), v.end());

  if (a.gold.empty()) {
    emit(ctx, a.out, write_segmentations(segs));
    return kExitOk;
  }
  if (!a.out.empty()) write_file(a.out, write_segmentations(segs));

  auto gold = load(a.gold, [](const std::string& t) { return read_segmentations(t); });
  std::map<std::pair<std::string, int>, const UtteranceSegmentation*> by_key;
  for (const auto& g : gold) {
    if (!by_key.emplace(std::pair{g.dialogue, g.utterance}, &g).second) {
      throw CorpusMismatch("gold segmentation repeats " + g.dialogue + "/" +
                           std::to_string(g.utterance));
    }
  }
  if (by_key.size() != segs.size()) {
    throw CorpusMismatch("gold segmentation covers " + std::to_string(by_key.size()) +
                         " utterances, input has " + std::to_string(segs.size()));
  }
  std::vector<std::vector<EduSpan>> pred_spans;
  std::vector<std::vector<EduSpan>> gold_spans;
  for (const auto& s : segs) {
    auto it = by_key.find({s.dialogue, s.utterance});
    if (it == by_key.end()) {
      throw CorpusMismatch("no gold segmentation for " + s.dialogue + "/" +
                           std::to_string(s.utterance));
    }
    pred_spans.push_back(s.edus);
    gold_spans.push_back(it->second->edus);
  }
  auto scores = segmentation_f1(pred_spans, gold_spans);
  Json j;
  j["overall"] = f1_json(scores.overall);
  j["multi"] = f1_json(scores.multi);
  j["single"] = f1_json(scores.single);
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

struct SourceArgs {
  std::string input;
  std::string lexicon;
  std::string signals;
  std::string out;
};

int cmd_detect(const Context& ctx, const SourceArgs& a) {
  auto corpus = load_corpus(a.input, ctx.policy);
  auto source = make_source(ctx, a.lexicon, a.signals);
  auto lines = parallel_map(corpus.size(), ctx.jobs, [&](std::size_t i) {
    std::string text;
    const auto& d = corpus[i];
    for (const auto& u : d.utterances) {
      auto edus = segment_with(u, true, ctx.cfg.segment);
      auto detected = detect_edu_signals(d.id, u, edus, source);
      Json j;
      j["dialog"] = d.id;
      j["utt"] = u.index;
      Json arr = Json::array();
      for (std::size_t e = 0; e < edus.size(); ++e) {
        Json edu;
        edu["start"] = edus[e].start;
        edu["end"] = edus[e].end;
        edu["signal"] = detected[e] ? Json(std::string(detected[e]->name())) : Json(nullptr);
        arr.push_back(std::move(edu));
      }
      j["edus"] = std::move(arr);
      text += j.dump() + "\n";
    }
    return text;
  });
  std::string all;
  for (const auto& l : lines) all += l;
  emit(ctx, a.out, all);
  return kExitOk;
}

struct TransformArgs {
  SourceArgs src;
  std::string mode = "post";
  std::string log;
};

Json transform_log_json(const Context& ctx, TransformMode mode,
                        const std::vector<DialogueTransform>& results) {
  Json j;
  j["mode"] = mode == TransformMode::Pre ? "pre" : "post";
  j["k"] = ctx.cfg.transform.min_span;
  Json labels = Json::array();
  for (Label l : ctx.cfg.transform.transforming) labels.push_back(label_name(l));
  j["labels"] = labels;
  std::map<Rule, std::size_t> totals;
  Json dialogues = Json::array();
  for (const auto& r : results) {
    Json d;
    d["dialog"] = r.log.dialogue;
    Json events = Json::array();
    for (const auto& e : r.log.events) {
      Json ev;
      ev["utt"] = e.utterance;
      ev["token"] = e.token;
      ev["rule"] = rule_name(e.rule);
      ev["tail"] = e.tail;
      ev["old_head"] = e.old_head;
      ev["new_head"] = e.new_head;
      ev["old_label"] = label_name(e.old_label);
      ev["new_label"] = label_name(e.new_label);
      events.push_back(std::move(ev));
      ++totals[e.rule];
    }
    d["events"] = std::move(events);
    dialogues.push_back(std::move(d));
  }
  Json counts = Json::object();
  for (Rule r : {Rule::Relabel, Rule::Reverse, Rule::Greeting, Rule::NoTail, Rule::Conflict}) {
    counts[std::string(rule_name(r))] = totals[r];
  }
  j["counts"] = counts;
  j["dialogues"] = std::move(dialogues);
  return j;
}

int cmd_transform(const Context& ctx, const TransformArgs& a) {
  TransformMode mode;
  if (a.mode == "pre") {
    mode = TransformMode::Pre;
  } else if (a.mode == "post") {
    mode = TransformMode::Post;
  } else {
    throw UsageError("--mode: expected 'pre' or 'post'");
  }
  auto corpus = load_corpus(a.src.input, ctx.policy);
  auto source = make_source(ctx, a.src.lexicon, a.src.signals);
  auto results = parallel_map(corpus.size(), ctx.jobs, [&](std::size_t i) {
    try {
      return transform_dialogue(corpus[i], source, ctx.cfg.segment, ctx.cfg.transform, mode);
    } catch (const Error& e) {
      throw Error("dialogue '" + corpus[i].id + "': " + e.what());
    }
  });
  std::vector<Dialogue> transformed;
  for (const auto& r : results) transformed.push_back(r.dialogue);
  std::string log = transform_log_json(ctx, mode, results).dump(2) + "\n";

  if (a.src.out.empty() || a.src.out == "-") {
    ctx.out << write_dialogues(transformed);
    if (!a.log.empty()) write_file(a.log, log);
  } else {
    write_file(a.src.out, write_dialogues(transformed));
    emit(ctx, a.log, log);
  }
  if (ctx.verbose) {
    std::size_t n = 0;
    for (const auto& r : results) n += r.log.events.size();
    ctx.err << "transformed " << transformed.size() << " dialogues, " << n << " events\n";
  }
  return kExitOk;
}

struct FilterArgs {
  std::string scores;
  std::string pred;
  std::string view = "parser-S";
  std::string out;
  std::string corpus_out;
};

Json confidence_summary(const std::vector<PseudoSample>& samples) {
  Json j;
  if (samples.empty()) {
    j["arc"] = nullptr;
    j["label"] = nullptr;
    return j;
  }
  double arc = 0.0;
  double label = 0.0;
  for (const auto& s : samples) {
    arc += s.confidence.arc;
    label += s.confidence.label;
  }
  auto n = static_cast<double>(samples.size());
  j["arc"] = number(arc / n);
  j["label"] = number(label / n);
  return j;
}

int cmd_filter(const Context& ctx, const Globals& g, const FilterArgs& a) {
  auto view = parse_view(a.view);
  if (!view) throw UsageError("--view: expected 'parser-S' or 'parser-T'");
  auto preds = load_corpus(a.pred, LinkPolicy::Optional);
  auto scores = load(a.scores, [](const std::string& t) { return read_scores(t); });
  std::vector<PseudoSample> samples;
  try {
    samples = make_samples(preds, scores, *view);
  } catch (const Error& e) {
    throw Error(a.scores + ": " + e.what());
  }
  // Scores are fixed inputs here, so further rounds select the same set;
  // retraining between rounds happens outside this tool.
  std::vector<PseudoSample> kept = samples;
  for (int r = 0; r < ctx.cfg.iterations; ++r) kept = filter(kept, ctx.cfg.epsilon);

  if (!a.out.empty()) write_file(a.out, write_samples(kept));
  if (!a.corpus_out.empty()) write_file(a.corpus_out, write_dialogues(samples_to_corpus(kept)));

  Json j;
  j["command"] = "filter";
  j["view"] = view_name(*view);
  j["epsilon"] = number(ctx.cfg.epsilon);
  j["iterations"] = ctx.cfg.iterations;
  j["seed"] = g.seed;
  j["inputs"] = {{"pred", a.pred}, {"scores", a.scores}};
  j["total"] = samples.size();
  j["kept"] = kept.size();
  j["rejected"] = samples.size() - kept.size();
  j["mean_confidence"] = confidence_summary(kept);
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

struct MergeArgs {
  std::vector<std::string> views;
  std::string dedup;
  std::string out;
  std::string corpus_out;
};

int cmd_merge(const Context& ctx, const Globals& g, const MergeArgs& a) {
  DedupScore how = ctx.cfg.dedup;
  if (!a.dedup.empty()) {
    auto d = parse_dedup(a.dedup);
    if (!d) throw UsageError("--dedup: expected 'min' or 'mean'");
    how = *d;
  }
  auto first = load(a.views[0], [](const std::string& t) { return read_samples(t); });
  auto second = load(a.views[1], [](const std::string& t) { return read_samples(t); });
  auto merged = merge_multiview(first, second, how);

  if (!a.out.empty()) write_file(a.out, write_samples(merged));
  if (!a.corpus_out.empty()) {
    write_file(a.corpus_out, write_dialogues(samples_to_corpus(merged)));
  }

  std::map<std::string, std::size_t> by_view;
  for (const auto& s : merged) ++by_view[std::string(view_name(s.view))];
  Json j;
  j["command"] = "merge";
  j["dedup"] = how == DedupScore::Min ? "min" : "mean";
  j["seed"] = g.seed;
  j["inputs"] = Json::array({{{"path", a.views[0]}, {"samples", first.size()}},
                             {{"path", a.views[1]}, {"samples", second.size()}}});
  j["merged"] = merged.size();
  j["duplicates"] = first.size() + second.size() - merged.size();
  Json views = Json::object();
  for (View v : {View::ParserS, View::ParserT}) {
    views[std::string(view_name(v))] = by_view[std::string(view_name(v))];
  }
  j["by_view"] = views;
  j["mean_confidence"] = confidence_summary(merged);
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string pred;
  std::string gold;
  std::string report;
  bool by_label = false;
};

int cmd_eval(const Context& ctx, const EvalArgs& a) {
  auto pred = load_corpus(a.pred, ctx.policy);
  auto gold = load_corpus(a.gold, ctx.policy);
  auto s = attachment_scores(pred, gold);
  Json j;
  j["inner"] = counts_json(s.inner);
  j["inter"] = counts_json(s.inter);
  j["overall"] = counts_json(s.overall);
  std::string text = "scope         tokens      UAS      LAS\n";
  text += report_line("inner", s.inner);
  text += report_line("inter", s.inter);
  text += report_line("overall", s.overall);
  if (a.by_label) {
    Json labels = Json::object();
    text += "\n";
    for (const auto& [l, c] : s.by_label) {
      labels[std::string(label_name(l))] = counts_json(c);
      text += report_line(std::string(label_name(l)), c);
    }
    j["by_label"] = labels;
  }
  ctx.out << j.dump(2) << "\n";
  if (!a.report.empty()) write_file(a.report, text);
  if (ctx.verbose) ctx.err << text;
  return kExitOk;
}

struct MatchArgs {
  std::string pred;
  std::string gold;
  std::string syn_label = "dfsubj";
  std::string inter_label;
  std::size_t top = 5;
};

int cmd_match(const Context& ctx, const MatchArgs& a) {
  Label syn = parse_one_label(a.syn_label, "--syn-label");
  if (!is_syntactic(syn)) throw UsageError("--syn-label must be a syntactic label");
  std::optional<Label> inter;
  if (!a.inter_label.empty()) {
    inter = parse_one_label(a.inter_label, "--inter-label");
    if (!is_inter_edu(*inter)) throw UsageError("--inter-label must be an inter-EDU label");
  }
  auto pred = load_corpus(a.pred, ctx.policy);
  auto gold = load_corpus(a.gold, ctx.policy);
  Json j;
  j["syn_label"] = label_name(syn);
  if (inter) {
    j["inter_label"] = label_name(*inter);
    j["score"] = optional_number(matching_score(pred, gold, syn, *inter));
  } else {
    Json ranking = Json::array();
    for (const auto& [l, v] : matching_ranking(pred, gold, syn, a.top)) {
      ranking.push_back({{"label", label_name(l)}, {"score", number(v)}});
    }
    j["ranking"] = ranking;
  }
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_signal_match(const Context& ctx, const std::string& gold_path,
                     const std::string& lexicon_path) {
  auto gold = load_corpus(gold_path, ctx.policy);
  auto lex = load_lexicon(lexicon_path, ctx.cfg.transform);
  auto result = signal_matching(gold, lex, ctx.cfg.segment);
  Json j = Json::object();
  for (const auto& [l, m] : result) {
    j[std::string(label_name(l))] = {
        {"arcs", m.arcs}, {"matched", m.matched}, {"accuracy", number(m.accuracy())}};
  }
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string scores_s;
  std::string pred_s;
  std::string scores_t;
  std::string pred_t;
  std::vector<double> epsilons;
  std::string dedup;
};

int cmd_sweep(const Context& ctx, const SweepArgs& a) {
  if (a.scores_s.empty() != a.pred_s.empty() || a.scores_t.empty() != a.pred_t.empty()) {
    throw UsageError("each view needs both --pred-* and --scores-*");
  }
  if (a.scores_s.empty() && a.scores_t.empty()) {
    throw UsageError("at least one view (--pred-s/--scores-s or --pred-t/--scores-t) is required");
  }
  DedupScore how = ctx.cfg.dedup;
  if (!a.dedup.empty()) {
    auto d = parse_dedup(a.dedup);
    if (!d) throw UsageError("--dedup: expected 'min' or 'mean'");
    how = *d;
  }
  std::vector<double> eps = a.epsilons;
  if (eps.empty()) {
    for (int i = 0; i < 20; ++i) eps.push_back(round_to_precision(0.80 + 0.01 * i));
  }
  for (double e : eps) {
    if (!(e >= 0.0 && e <= 1.0)) throw UsageError("--epsilons values must lie in [0,1]");
  }
  std::vector<PseudoSample> all;
  auto add = [&](const std::string& pred_path, const std::string& score_path, View v) {
    if (pred_path.empty()) return;
    auto preds = load_corpus(pred_path, LinkPolicy::Optional);
    auto scores = load(score_path, [](const std::string& t) { return read_scores(t); });
    try {
      auto s = make_samples(preds, scores, v);
      all.insert(all.end(), s.begin(), s.end());
    } catch (const Error& e) {
      throw Error(score_path + ": " + e.what());
    }
  };
  add(a.pred_s, a.scores_s, View::ParserS);
  add(a.pred_t, a.scores_t, View::ParserT);

  Json rows = Json::array();
  for (const auto& r : threshold_sweep(all, eps, how)) {
    rows.push_back({{"epsilon", number(r.epsilon)},
                    {"parser-S", r.kept_s},
                    {"parser-T", r.kept_t},
                    {"merged", r.merged}});
  }
  Json j;
  j["dedup"] = how == DedupScore::Min ? "min" : "mean";
  j["rows"] = rows;
  ctx.out << j.dump(2) << "\n";
  return kExitOk;
}

// Dual-layer view: local dependents, then links leaving the token.
void render_node(const Dialogue& d, Coord c, Label label, int depth, std::string& text) {
  const Utterance& u = d.utterances[static_cast<std::size_t>(c.utterance)];
  const Token& tok = u.tokens[static_cast<std::size_t>(c.token - 1)];
  text += std::string(static_cast<std::size_t>(depth) * 2, ' ');
  text += std::string(label_name(label)) + " " + tok.form + " (" + std::to_string(c.utterance) +
          ":" + std::to_string(c.token) + ")\n";
  for (const auto& t : u.tokens) {
    if (t.head == c.token) render_node(d, {c.utterance, t.index}, t.label, depth + 1, text);
  }
  for (const auto& l : d.links) {
    if (l.head == c) render_node(d, l.tail, l.label, depth + 1, text);
  }
}

int cmd_render(const Context& ctx, const std::string& path, const std::string& only) {
  auto corpus = load_corpus(path, ctx.policy);
  std::string text;
  bool found = false;
  for (const auto& d : corpus) {
    if (!only.empty() && d.id != only) continue;
    found = true;
    text += "# dialog = " + d.id + "\n";
    for (const auto& u : d.utterances) {
      if (d.link_into(u.index) != nullptr) continue;
      auto root = u.root();
      if (!root) throw MissingRoot("dialogue '" + d.id + "' utterance " + std::to_string(u.index));
      text += "[" + std::to_string(u.index) + "] " + u.speaker + "\n";
      render_node(d, {u.index, *root}, u.tokens[static_cast<std::size_t>(*root - 1)].label, 1,
                  text);
    }
    text += "\n";
  }
  if (!only.empty() && !found) throw Error(path + ": no dialogue '" + only + "'");
  ctx.out << text;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dialogue-level dependency parsing toolkit", "dialdep"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed recorded in manifests")->capture_default_str();
  auto* eps_opt = app.add_option("--epsilon", g.epsilon, "Confidence threshold")
                      ->check(CLI::Range(0.0, 1.0))
                      ->capture_default_str();
  auto* k_opt = app.add_option("--k", g.k, "Minimum arc span for transforming labels")
                    ->check(CLI::PositiveNumber)
                    ->capture_default_str();
  auto* it_opt = app.add_option("--iterations", g.iterations, "Selection rounds")
                     ->check(CLI::PositiveNumber)
                     ->capture_default_str();
  app.add_option("--config", g.config, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--jobs", g.jobs, "Worker threads (per dialogue)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--links", g.links, "Link layer policy for dialogue files")
      ->check(CLI::IsMember({"required", "optional"}))
      ->capture_default_str();
  app.add_flag("--verbose,-v", g.verbose, "Human-readable report on stderr");

  std::string input;
  auto* validate = app.add_subcommand("validate", "Check a dialogue file");
  validate->add_option("file", input, "Dialogue file")->required();

  auto* stats = app.add_subcommand("stats", "Label counts and corpus sizes");
  stats->add_option("file", input, "Dialogue file")->required();

  SegmentArgs seg_args;
  auto* seg = app.add_subcommand("segment", "Split utterances into EDUs");
  seg->add_option("file", seg_args.input, "Dialogue file")->required();
  seg->add_option("--gold", seg_args.gold, "Gold EDU span file; prints F1");
  seg->add_option("--out", seg_args.out, "EDU span output (default stdout)");
  seg->add_flag("--punct-only", seg_args.punct_only, "Ignore arcs for implicit boundaries");

  SourceArgs det_args;
  auto* det = app.add_subcommand("detect-signals", "Detect the signal of every EDU");
  det->add_option("file", det_args.input, "Dialogue file")->required();
  det->add_option("--lexicon", det_args.lexicon, "Signal lexicon TSV");
  det->add_option("--signals", det_args.signals, "Signal distribution file");
  det->add_option("--out", det_args.out, "Output (default stdout)");

  TransformArgs tr_args;
  std::vector<std::string> tr_labels;
  auto* tr = app.add_subcommand("transform", "Signal-based tree transformation");
  tr->add_option("file", tr_args.src.input, "Dialogue file")->required();
  tr->add_option("--mode", tr_args.mode, "pre or post")
      ->check(CLI::IsMember({"pre", "post"}))
      ->capture_default_str();
  tr->add_option("--lexicon", tr_args.src.lexicon, "Signal lexicon TSV");
  tr->add_option("--signals", tr_args.src.signals, "Signal distribution file");
  auto* labels_opt =
      tr->add_option("--labels", tr_labels, "Transforming labels")->delimiter(',');
  tr->add_option("--out", tr_args.src.out, "Transformed corpus (default stdout)");
  tr->add_option("--log", tr_args.log, "Transform log JSON");

  FilterArgs fl_args;
  auto* fl = app.add_subcommand("filter", "Confidence-based pseudo-label selection");
  fl->add_option("--scores", fl_args.scores, "Score JSON lines")->required();
  fl->add_option("--pred", fl_args.pred, "Predicted trees (dialogue format)")->required();
  fl->add_option("--view", fl_args.view, "parser-S or parser-T")->capture_default_str();
  fl->add_option("--out", fl_args.out, "Kept samples JSON lines");
  fl->add_option("--corpus-out", fl_args.corpus_out, "Kept samples as a dialogue file");

  MergeArgs mg_args;
  auto* mg = app.add_subcommand("merge", "Merge two views with deduplication");
  mg->add_option("--views", mg_args.views, "Two sample files")->required()->expected(2);
  mg->add_option("--dedup", mg_args.dedup, "min or mean");
  mg->add_option("--out", mg_args.out, "Merged samples JSON lines");
  mg->add_option("--corpus-out", mg_args.corpus_out, "Merged samples as a dialogue file");

  EvalArgs ev_args;
  auto* ev = app.add_subcommand("eval", "Attachment scores");
  ev->add_option("--pred", ev_args.pred, "Predicted dialogue file")->required();
  ev->add_option("--gold", ev_args.gold, "Gold dialogue file")->required();
  ev->add_flag("--by-label", ev_args.by_label, "Per-label breakdown");
  ev->add_option("--report", ev_args.report, "Aligned-text report file");

  MatchArgs mt_args;
  auto* mt = app.add_subcommand("match", "Matching score of a syntactic label");
  mt->add_option("--pred", mt_args.pred, "Predicted dialogue file")->required();
  mt->add_option("--gold", mt_args.gold, "Gold dialogue file")->required();
  mt->add_option("--syn-label", mt_args.syn_label, "Predicted syntactic label")
      ->capture_default_str();
  mt->add_option("--inter-label", mt_args.inter_label, "Score one inter-EDU label only");
  mt->add_option("--top", mt_args.top, "Ranking length")->capture_default_str();

  std::string sm_gold;
  std::string sm_lexicon;
  auto* sm = app.add_subcommand("signal-match", "Signal word accuracy per relation");
  sm->add_option("--gold", sm_gold, "Gold dialogue file")->required();
  sm->add_option("--lexicon", sm_lexicon, "Signal lexicon TSV")->required();

  SweepArgs sw_args;
  auto* sw = app.add_subcommand("sweep", "Kept samples per threshold and view");
  sw->add_option("--pred-s", sw_args.pred_s, "parser-S predictions");
  sw->add_option("--scores-s", sw_args.scores_s, "parser-S scores");
  sw->add_option("--pred-t", sw_args.pred_t, "parser-T predictions");
  sw->add_option("--scores-t", sw_args.scores_t, "parser-T scores");
  sw->add_option("--epsilons", sw_args.epsilons, "Thresholds (default 0.80..0.99)")
      ->delimiter(',');
  sw->add_option("--dedup", sw_args.dedup, "min or mean");

  std::string render_only;
  auto* rd = app.add_subcommand("render", "Print dialogue trees as indented text");
  rd->add_option("file", input, "Dialogue file")->required();
  rd->add_option("--dialog", render_only, "Only this dialogue");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("dialdep");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Context ctx{{}, LinkPolicy::Required, g.jobs, g.verbose, out, err};
  try {
    if (!g.config.empty()) ctx.cfg = load_config(read_file(g.config));
    if (*seed_opt) ctx.cfg.seed = g.seed;
    if (*eps_opt) ctx.cfg.epsilon = g.epsilon;
    if (*k_opt) ctx.cfg.transform.min_span = g.k;
    if (*it_opt) ctx.cfg.iterations = g.iterations;
    if (*labels_opt) ctx.cfg.transform.transforming = parse_label_list(tr_labels, "--labels");
    ctx.cfg.transform.validate();
    ctx.cfg.segment.validate();
    g.seed = ctx.cfg.seed;
    ctx.policy = g.links == "optional" ? LinkPolicy::Optional : LinkPolicy::Required;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(ctx, input);
    if (*stats) return cmd_stats(ctx, input);
    if (*seg) return cmd_segment(ctx, seg_args);
    if (*det) return cmd_detect(ctx, det_args);
    if (*tr) return cmd_transform(ctx, tr_args);
    if (*fl) return cmd_filter(ctx, g, fl_args);
    if (*mg) return cmd_merge(ctx, g, mg_args);
    if (*ev) return cmd_eval(ctx, ev_args);
    if (*mt) return cmd_match(ctx, mt_args);
    if (*sm) return cmd_signal_match(ctx, sm_gold, sm_lexicon);
    if (*sw) return cmd_sweep(ctx, sw_args);
    if (*rd) return cmd_render(ctx, input, render_only);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace dialdep::cli
