#include <doctest.h>

#include <cstdlib>

#include "dialdep/io.hpp"
#include "dialdep/transform.hpp"
#include "generators.hpp"

using namespace dialdep;

namespace {

const Signal kCond = Signal::relation(Label::Cond);
const Signal kAttr = Signal::relation(Label::Attr);
const Signal kElbr = Signal::relation(Label::Elbr);
const Signal kQst = Signal::relation(Label::QstAns);
const Signal kGreet = Signal::greeting();

DependencyInstance inst(std::vector<int> heads, std::vector<Label> labels) {
  return DependencyInstance{std::move(heads), std::move(labels), {}};
}

std::vector<EduSpan> spans(std::initializer_list<std::pair<int, int>> v) {
  std::vector<EduSpan> out;
  for (auto [s, e] : v) out.push_back({0, s, e});
  return out;
}

std::string fixture(const char* name) { return read_file(std::string(DIALDEP_FIXTURES) + "/" + name); }

SignalSource fixture_lexicon() {
  return SignalSource::from_lexicon(read_lexicon(fixture("lexicon.tsv")));
}

}  // namespace

TEST_CASE("find_tail") {
  CHECK(find_tail(inst({0, 1, 1}, {Label::Root, Label::Obj, Label::Obj}), spans({{1, 2}, {3, 3}}), 1) == 3);
  CHECK(find_tail(inst({0, 1, 1}, {Label::Root, Label::Obj, Label::Obj}), spans({{1, 1}, {2, 2}, {3, 3}}), 1) == 2);
  CHECK_FALSE(find_tail(inst({0, 1}, {Label::Root, Label::Obj}), spans({{1, 2}}), 1));
  CHECK(find_tail(inst({0, 1, 1, 1}, std::vector<Label>(4, Label::Obj)), spans({{1, 2}, {3, 4}}), 1) == 3);
  // a token outside every span is never a tail
  CHECK_FALSE(find_tail(inst({0, 1, 1}, std::vector<Label>(3, Label::Obj)), spans({{1, 2}}), 1));
}

TEST_CASE("relabel mask") {
  TransformConfig cfg;
  auto i = inst({0, 1, 1, 3}, {Label::Root, Label::Obj, Label::Sasubj, Label::Dfsubj});
  auto m = relabel_mask(i, spans({{1, 4}}), cfg);
  // root always crosses; sasubj spans 2; dfsubj spans 1
  CHECK(m == std::vector<bool>{false, true, false, true, false});
  auto m2 = relabel_mask(i, spans({{1, 2}, {3, 4}}), cfg);
  CHECK(m2 == std::vector<bool>{false, true, false, true, false});
  auto m3 = relabel_mask(i, spans({{1, 1}, {2, 4}}), cfg);
  CHECK(m3 == std::vector<bool>{false, true, true, true, false});
  cfg.min_span = 1;
  CHECK(relabel_mask(i, spans({{1, 4}}), cfg)[4]);
}

TEST_CASE("no L-label and no EDU-crossing arc: output equals input") {
  // head 0 counts as crossing, so the root is always rewritten to its
  // signal; with the root already carrying it nothing changes
  auto in = inst({2, 0, 2}, {Label::Subj, Label::Cond, Label::Obj});
  std::vector<Signal> s(3, kCond);
  TransformConfig cfg;
  cfg.reversal.clear();
  auto r = posttran(in, spans({{1, 3}}), s, cfg);
  CHECK(r.instance == in);
  REQUIRE(r.events.size() == 1);
  CHECK(r.events[0].token == 2);
}

TEST_CASE("root relabel uses the signal") {
  auto in = inst({2, 0, 2}, {Label::Subj, Label::Root, Label::Obj});
  std::vector<Signal> s(3, kQst);
  auto r = posttran(in, spans({{1, 3}}), s, TransformConfig{});
  CHECK(r.instance.heads == in.heads);
  CHECK(r.instance.labels == std::vector<Label>{Label::Subj, Label::QstAns, Label::Obj});
  REQUIRE(r.events.size() == 1);
  CHECK(r.events[0].rule == Rule::Relabel);
  CHECK(r.events[0].token == 2);
}

TEST_CASE("dfsubj arc under an attr signal") {
  // 我 看到 ， 提供 了 地址 吗 : "提供" depends on "看到" by dfsubj
  auto in = inst({2, 0, 2, 2, 4, 4, 4}, {Label::Subj, Label::Root, Label::Punc, Label::Dfsubj,
                                         Label::Adjct, Label::Obj, Label::Adjct});
  auto edus = spans({{1, 3}, {4, 7}});
  std::vector<Signal> s{kAttr, kAttr, kAttr, kQst, kQst, kQst, kQst};
  auto r = posttran(in, edus, s, TransformConfig{});
  CHECK(r.instance.heads == std::vector<int>{2, 4, 2, 0, 4, 4, 4});
  CHECK(r.instance.labels == std::vector<Label>{Label::Subj, Label::Attr, Label::Punc, Label::Attr,
                                                Label::Adjct, Label::Obj, Label::Adjct});
  CHECK(validate_instance(r.instance).empty());
  std::vector<Rule> rules;
  for (const auto& e : r.events) rules.push_back(e.rule);
  CHECK(rules == std::vector<Rule>{Rule::Relabel, Rule::Relabel, Rule::Reverse});
  CHECK(r.events[2].token == 2);
  CHECK(r.events[2].tail == 4);

  SUBCASE("tail keeps its own relabel when configured") {
    TransformConfig keep;
    keep.tail_label = TailLabel::Keep;
    auto k = posttran(in, edus, s, keep);
    CHECK(k.instance.labels[3] == Label::QstAns);
    CHECK(k.instance.heads == r.instance.heads);
  }
}

TEST_CASE("greeting opener moves the root") {
  // 你好 ， 我 想 问 一下
  auto in = inst({0, 1, 4, 1, 4, 5},
                 {Label::Root, Label::Punc, Label::Subj, Label::Coo, Label::Obj, Label::Cmp});
  std::vector<Signal> s{kGreet, kGreet, kElbr, kElbr, kElbr, kElbr};
  auto r = posttran(in, spans({{1, 2}, {3, 6}}), s, TransformConfig{});
  CHECK(r.instance.heads == std::vector<int>{4, 1, 4, 0, 4, 5});
  CHECK(r.instance.labels == std::vector<Label>{Label::Elbr, Label::Punc, Label::Subj, Label::Root,
                                                Label::Obj, Label::Cmp});
  CHECK(r.events.back().rule == Rule::Greeting);

  SUBCASE("greeting signal off the root only relabels") {
    auto off = inst({2, 0}, {Label::Coo, Label::Root});
    std::vector<Signal> g{kGreet, kElbr};
    auto o = posttran(off, spans({{1, 1}, {2, 2}}), g, TransformConfig{});
    CHECK(o.instance.heads == off.heads);
    CHECK(o.instance.labels[0] == Label::Elbr);
  }
}

TEST_CASE("two-clause sentence joined by sasubj with a cond clause") {
  Utterance u{0, "A", {}};
  const std::vector<std::tuple<const char*, int, Label>> toks{
      {"如果", 4, Label::Adv}, {"地址", 4, Label::Subj}, {"不", 4, Label::Adv},
      {"对", 0, Label::Root},   {"，", 4, Label::Punc},   {"联系", 4, Label::Sasubj},
      {"我", 6, Label::Obj}};
  int i = 0;
  for (auto [f, h, l] : toks) u.tokens.push_back({++i, f, h, l});
  auto ut = pretran("d", u, fixture_lexicon(), SegmenterConfig{}, TransformConfig{});
  CHECK(ut.edus == spans({{1, 5}, {6, 7}}));
  CHECK(ut.edu_signals[0] == kCond);
  CHECK_FALSE(ut.edu_signals[1]);
  std::vector<int> heads;
  std::vector<Label> labels;
  for (const auto& t : ut.utterance.tokens) {
    heads.push_back(t.head);
    labels.push_back(t.label);
  }
  CHECK(heads == std::vector<int>{4, 4, 4, 6, 4, 0, 6});
  CHECK(labels == std::vector<Label>{Label::Adv, Label::Subj, Label::Adv, Label::Cond, Label::Punc,
                                     Label::Cond, Label::Obj});
  CHECK(ut.root_signal() == std::nullopt);
}

TEST_CASE("no tail and conflicts are logged and skipped") {
  TransformConfig cfg;
  SUBCASE("no tail") {
    auto in = inst({0, 1}, {Label::Root, Label::Obj});
    std::vector<Signal> s(2, kCond);
    auto r = posttran(in, spans({{1, 2}}), s, cfg);
    CHECK(r.instance.heads == in.heads);
    CHECK(r.events.back().rule == Rule::NoTail);
  }
  SUBCASE("conflict") {
    // chain 1 -> 2 -> 3 over three EDUs: 1 reverses with 2, then 2 may not
    auto in = inst({0, 1, 2}, {Label::Root, Label::Sasubj, Label::Sasubj});
    cfg.min_span = 1;
    std::vector<Signal> s(3, kCond);
    auto r = posttran(in, spans({{1, 1}, {2, 2}, {3, 3}}), s, cfg);
    CHECK(r.instance.heads == std::vector<int>{2, 0, 2});
    std::size_t conflicts = 0;
    for (const auto& e : r.events) conflicts += e.rule == Rule::Conflict;
    CHECK(conflicts == 1);
    CHECK(r.events.back().rule == Rule::NoTail);
    CHECK(validate_instance(r.instance).empty());
  }
}

TEST_CASE("input errors") {
  auto in = inst({0, 1}, {Label::Root, Label::Obj});
  std::vector<Signal> one{kCond};
  CHECK_THROWS_AS(posttran(in, spans({{1, 2}}), one, TransformConfig{}), LengthMismatch);
  std::vector<Signal> two(2, kCond);
  CHECK_THROWS_AS(posttran(in, spans({{1, 1}}), two, TransformConfig{}), UncoveredToken);
  CHECK_THROWS_AS(posttran(inst({2, 1}, {Label::Root, Label::Obj}), spans({{1, 2}}), two,
                           TransformConfig{}),
                  BrokenTree);
}

TEST_CASE("config validation") {
  TransformConfig cfg;
  cfg.validate();
  cfg.transforming.insert(Label::Cond);
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.min_span = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.reversal.insert(Label::Subj);
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.greeting_name = "elbr";
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("link_utterances") {
  auto make = [](int k) {
    Dialogue d{"d", {}, {}};
    for (int u = 0; u < k; ++u) {
      d.utterances.push_back(Utterance{u, "A", {{1, "x", 2, Label::Subj}, {2, "y", 0, Label::Root}}});
    }
    return d;
  };
  TransformConfig cfg;
  SUBCASE("qst-ans") {
    std::vector<std::optional<Signal>> sig{kQst, std::nullopt};
    auto links = link_utterances(make(2), sig, cfg);
    REQUIRE(links.size() == 1);
    CHECK(links[0] == InterUtteranceLink{{0, 2}, {1, 2}, Label::QstAns});
  }
  SUBCASE("one utterance") {
    std::vector<std::optional<Signal>> sig{kQst};
    CHECK(link_utterances(make(1), sig, cfg).empty());
  }
  SUBCASE("chain with fallback") {
    std::vector<std::optional<Signal>> sig{std::nullopt, kGreet, std::nullopt};
    auto d = make(3);
    auto links = link_utterances(d, sig, cfg);
    REQUIRE(links.size() == 2);
    CHECK(links[0].label == Label::StmRsp);
    CHECK(links[1].label == Label::StmRsp);
    CHECK(links[1].head.utterance == 1);
    d.links = links;
    CHECK(validate_dialogue(d).ok());
  }
  SUBCASE("errors") {
    std::vector<std::optional<Signal>> sig{kQst};
    CHECK_THROWS_AS(link_utterances(make(2), sig, cfg), LengthMismatch);
    auto d = make(2);
    d.utterances[1].tokens[1].head = 1;
    std::vector<std::optional<Signal>> two{kQst, kQst};
    CHECK_THROWS_AS(link_utterances(d, two, cfg), MissingRoot);
  }
}

TEST_CASE("dialogue transform on the fixture") {
  auto pred = read_dialogues(fixture("svc_pred.cddt"));
  auto gold = read_dialogues(fixture("svc_gold.cddt"));
  auto r = transform_dialogue(pred[0], fixture_lexicon(), SegmenterConfig{}, TransformConfig{},
                              TransformMode::Post);
  CHECK(r.dialogue == gold[0]);
  CHECK(r.log.count(Rule::Greeting) == 1);
  CHECK(r.log.count(Rule::Reverse) == 2);
  CHECK(r.log.count(Rule::Relabel) == 6);

  SUBCASE("pre mode keeps link labels and follows moved roots") {
    auto p = transform_dialogue(pred[0], fixture_lexicon(), SegmenterConfig{}, TransformConfig{},
                                TransformMode::Pre);
    REQUIRE(p.dialogue.links.size() == 2);
    CHECK(p.dialogue.links[0] == InterUtteranceLink{{0, 1}, {1, 4}, Label::StmRsp});
    CHECK(p.dialogue.links[1] == InterUtteranceLink{{1, 2}, {2, 6}, Label::StmRsp});
    CHECK(validate_dialogue(p.dialogue).ok());
  }
}

TEST_CASE("property: rewrites keep trees, relabel-only passes are idempotent") {
  testgen::Rng rng(17);
  auto inter = testgen::family(LabelFamily::InterEdu);
  TransformConfig cfg;
  for (int k = 0; k < 500; ++k) {
    const int n = rng.uniform(1, 15);
    auto u = testgen::random_utterance(rng, 0, n);
    for (auto& t : u.tokens) {
      if (t.head != 0 && rng.chance(0.3)) t.label = rng.chance(0.5) ? Label::Sasubj : Label::Dfsubj;
    }
    auto in = DependencyInstance::from_utterance(u);
    std::vector<EduSpan> edus;
    std::vector<std::optional<Signal>> per_edu;
    const bool relabel_only = rng.chance(0.5);
    for (int start = 1; start <= n;) {
      int end = rng.uniform(start, n);
      edus.push_back({0, start, end});
      std::optional<Signal> s;
      if (!relabel_only && rng.chance(0.2)) {
        s = kGreet;
      } else if (rng.chance(0.8)) {
        Label l = rng.pick(inter);
        if (relabel_only) {
          while (cfg.reversal.count(l)) l = rng.pick(inter);
        }
        s = Signal::relation(l);
      }
      per_edu.push_back(s);
      start = end + 1;
    }
    auto signals = expand_signals(edus, per_edu, n);
    auto r = posttran(in, edus, signals, cfg);
    REQUIRE(validate_instance(r.instance).empty());

    // audit: one relabel event per position satisfying the relabel condition
    auto of = edu_membership(edus, n);
    std::size_t expected = 0;
    for (int i = 1; i <= n; ++i) {
      const int h = in.head(i);
      const bool crosses = h == 0 || of[static_cast<std::size_t>(h)] != of[static_cast<std::size_t>(i)];
      const bool spans_k = cfg.transforming.count(in.label(i)) && std::abs(i - h) >= cfg.min_span;
      expected += crosses || spans_k;
    }
    std::size_t relabels = 0;
    for (const auto& e : r.events) relabels += e.rule == Rule::Relabel;
    CHECK(relabels == expected);

    if (relabel_only) {
      CHECK(r.instance.heads == in.heads);
      auto again = posttran(r.instance, edus, signals, cfg);
      CHECK(again.instance == r.instance);
    }
  }
}

TEST_CASE("empty lexicon degrades to fallback relabels") {
  testgen::Rng rng(5);
  auto source = SignalSource::from_lexicon(SignalLexicon{});
  for (int k = 0; k < 100; ++k) {
    auto u = testgen::random_utterance(rng, 0, rng.uniform(1, 12));
    auto ut = pretran("d", u, source, SegmenterConfig{}, TransformConfig{});
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(ut.utterance.tokens[i].head == u.tokens[i].head);
      const bool changed = ut.utterance.tokens[i].label != u.tokens[i].label;
      if (changed) CHECK(ut.utterance.tokens[i].label == Label::Elbr);
    }
    for (const auto& e : ut.events) CHECK(e.rule == Rule::Relabel);
  }
}
