#include <doctest.h>

#include <cmath>

#include "dialdep/selection.hpp"
#include "generators.hpp"

using namespace dialdep;

namespace {

std::vector<double> one_hot(int width, int hot) {
  std::vector<double> r(static_cast<std::size_t>(width), 0.0);
  r[static_cast<std::size_t>(hot)] = 1.0;
  return r;
}

Matrix label_rows(int n) { return Matrix(static_cast<std::size_t>(n), one_hot(40, 0)); }

PseudoSample sample(std::string d, int utt, View v, double arc, double label,
                    std::string form = "x") {
  Utterance u{utt, "A", {{1, std::move(form), 0, Label::Root}}};
  return PseudoSample{std::move(d), u, v, {arc, label}};
}

}  // namespace

TEST_CASE("confidence") {
  SUBCASE("one-hot rows") {
    ScoreRecord rec{"d", 0, {one_hot(3, 1), one_hot(3, 0)}, label_rows(2)};
    CHECK(confidence(rec) == Confidence{1.0, 1.0});
  }
  SUBCASE("uniform arc rows") {
    ScoreRecord rec{"d", 0, Matrix(2, std::vector<double>(3, 1.0 / 3.0)), label_rows(2)};
    CHECK(std::abs(confidence(rec).arc - 1.0 / 3.0) < 1e-12);
  }
  SUBCASE("hand arithmetic") {
    ScoreRecord rec{"d", 0, {{0.7, 0.2, 0.1}, {0.1, 0.6, 0.3}}, label_rows(2)};
    CHECK(std::abs(confidence(rec).arc - 0.65) < 1e-12);
  }
  SUBCASE("not stochastic") {
    ScoreRecord rec{"d", 0, {{0.5, 0.5, 0.1}, {0.1, 0.6, 0.3}}, label_rows(2)};
    CHECK_THROWS_AS(confidence(rec), RowNotStochastic);
  }
}

TEST_CASE("property: confidence bounds and row permutation") {
  testgen::Rng rng(8);
  for (int k = 0; k < 200; ++k) {
    const int n = rng.uniform(1, 8);
    ScoreRecord rec{"d", 0, {}, label_rows(n)};
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(static_cast<std::size_t>(n) + 1);
      double sum = 0.0;
      for (auto& x : row) sum += (x = rng.real(0.0, 1.0));
      for (auto& x : row) x /= sum;
      rec.arc.push_back(row);
    }
    const double c = confidence(rec).arc;
    CHECK(c >= 1.0 / (n + 1) - 1e-12);
    CHECK(c <= 1.0);
    auto shuffled = rec;
    std::shuffle(shuffled.arc.begin(), shuffled.arc.end(), rng.engine());
    CHECK(confidence(shuffled).arc == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("filter") {
  std::vector<PseudoSample> s{sample("a", 0, View::ParserS, 0.99, 0.97),
                              sample("b", 0, View::ParserS, 0.99, 0.99)};
  auto kept = filter(s, 0.98);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].dialogue == "b");
  CHECK(filter(s, 0.0).size() == 2);
  CHECK(filter(s, 0.99).empty());  // strict
  std::vector<PseudoSample> one_hot_only{sample("c", 0, View::ParserS, 1.0, 1.0)};
  CHECK(filter(one_hot_only, 1.0 - 1e-12).size() == 1);
  CHECK(filter(s, 1.0 - 1e-12).empty());
  CHECK_THROWS_AS(filter(s, 1.5), InvalidArgument);
  CHECK_THROWS_AS(filter(s, -0.1), InvalidArgument);
}

TEST_CASE("property: filter is antitone in epsilon") {
  testgen::Rng rng(12);
  std::vector<PseudoSample> s;
  for (int k = 0; k < 300; ++k) {
    s.push_back(sample(std::to_string(k), 0, View::ParserS, rng.real(0.5, 1.0), rng.real(0.5, 1.0)));
  }
  std::vector<PseudoSample> prev = filter(s, 0.0);
  for (int step = 1; step <= 20; ++step) {
    auto cur = filter(s, 0.5 + 0.025 * step);
    CHECK(cur.size() <= prev.size());
    for (const auto& c : cur) {
      CHECK(std::find(prev.begin(), prev.end(), c) != prev.end());
    }
    prev = cur;
  }
}

TEST_CASE("merge_multiview") {
  SUBCASE("disjoint keys") {
    std::vector<PseudoSample> a{sample("a", 0, View::ParserS, 0.99, 0.99)};
    std::vector<PseudoSample> b{sample("b", 0, View::ParserT, 0.99, 0.99)};
    CHECK(merge_multiview(a, b).size() == 2);
  }
  SUBCASE("higher confidence wins") {
    std::vector<PseudoSample> a{sample("a", 0, View::ParserS, 0.99, 0.99, "s")};
    std::vector<PseudoSample> b{sample("a", 0, View::ParserT, 0.985, 0.985, "t")};
    auto m = merge_multiview(a, b);
    REQUIRE(m.size() == 1);
    CHECK(m[0].view == View::ParserS);
    CHECK(merge_multiview(b, a)[0].view == View::ParserS);
  }
  SUBCASE("min is the default magnitude, mean is available") {
    std::vector<PseudoSample> a{sample("a", 0, View::ParserS, 1.0, 0.95)};
    std::vector<PseudoSample> b{sample("a", 0, View::ParserT, 0.96, 0.96)};
    CHECK(merge_multiview(a, b)[0].view == View::ParserT);
    CHECK(merge_multiview(a, b, DedupScore::Mean)[0].view == View::ParserS);
  }
  SUBCASE("ties go to parser-T, then to the smaller annotation") {
    std::vector<PseudoSample> a{sample("a", 0, View::ParserS, 0.99, 0.99, "s")};
    std::vector<PseudoSample> b{sample("a", 0, View::ParserT, 0.99, 0.99, "t")};
    CHECK(merge_multiview(a, b)[0].view == View::ParserT);
    CHECK(merge_multiview(b, a)[0].view == View::ParserT);
    std::vector<PseudoSample> c{sample("a", 0, View::ParserS, 0.99, 0.99, "r")};
    CHECK(merge_multiview(a, c)[0].utterance.tokens[0].form == "r");
    CHECK(merge_multiview(c, a)[0].utterance.tokens[0].form == "r");
  }
  SUBCASE("idempotent and sorted") {
    std::vector<PseudoSample> a{sample("b", 1, View::ParserS, 0.99, 0.99),
                                sample("a", 2, View::ParserS, 0.99, 0.99),
                                sample("a", 1, View::ParserS, 0.99, 0.99)};
    auto m = merge_multiview(a, a);
    REQUIRE(m.size() == 3);
    CHECK(m[0].key() == std::pair<std::string, int>{"a", 1});
    CHECK(m[2].key() == std::pair<std::string, int>{"b", 1});
    CHECK(merge_multiview(m, m) == m);
  }
}

TEST_CASE("property: merge is commutative and idempotent") {
  testgen::Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    std::vector<PseudoSample> a, b;
    for (int i = 0; i < 20; ++i) {
      // coarse confidences force ties
      auto c = [&] { return 0.9 + 0.01 * rng.uniform(0, 5); };
      if (rng.chance(0.6)) a.push_back(sample("d", i, View::ParserS, c(), c(), rng.pick(testgen::form_pool())));
      if (rng.chance(0.6)) b.push_back(sample("d", i, View::ParserT, c(), c(), rng.pick(testgen::form_pool())));
    }
    auto ab = merge_multiview(a, b);
    CHECK(ab == merge_multiview(b, a));
    CHECK(merge_multiview(ab, ab) == ab);
  }
}

TEST_CASE("threshold sweep") {
  testgen::Rng rng(2);
  std::vector<PseudoSample> s;
  for (int i = 0; i < 100; ++i) {
    s.push_back(sample("d", i, View::ParserS, rng.real(0.8, 1.0), rng.real(0.8, 1.0)));
    s.push_back(sample("d", i, View::ParserT, rng.real(0.8, 1.0), rng.real(0.8, 1.0)));
  }
  auto rows = threshold_sweep(s, {0.95, 0.0, 0.9});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].epsilon == 0.0);
  CHECK(rows[0].kept_s == 100);
  CHECK(rows[0].kept_t == 100);
  CHECK(rows[0].merged == 100);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r].kept_s <= rows[r - 1].kept_s);
    CHECK(rows[r].kept_t <= rows[r - 1].kept_t);
    CHECK(rows[r].merged <= rows[r - 1].merged);
    CHECK(rows[r].merged >= std::max(rows[r].kept_s, rows[r].kept_t));
    // brute-force union size
    std::set<int> keys;
    for (const auto& x : s) {
      if (x.confidence.arc > rows[r].epsilon && x.confidence.label > rows[r].epsilon) {
        keys.insert(x.utterance.index);
      }
    }
    CHECK(rows[r].merged == keys.size());
  }
}

TEST_CASE("samples") {
  ScoreRecord rec{"d", 0, {one_hot(3, 2), {0.7, 0.2, 0.1}}, label_rows(2)};
  std::vector<ScoreRecord> scores{rec};
  Dialogue pred{"d", {Utterance{0, "A", {{1, "我", 2, Label::Subj}, {2, "想", 0, Label::Root}}}}, {}};
  std::vector<Dialogue> preds{pred};
  auto s = make_samples(preds, scores, View::ParserT);
  REQUIRE(s.size() == 1);
  CHECK(s[0].confidence.arc == doctest::Approx(0.85));
  CHECK(s[0].instance().confidence->arc == s[0].confidence.arc);

  auto text = write_samples(s);
  CHECK(text ==
        "{\"dialog\":\"d\",\"utt\":0,\"view\":\"parser-T\",\"c_arc\":0.85,\"c_label\":1.0,"
        "\"speaker\":\"A\",\"tokens\":[[\"我\",2,\"subj\"],[\"想\",0,\"root\"]]}\n");
  CHECK(read_samples(text) == s);
  CHECK(write_samples(read_samples(text)) == text);

  auto corpus = samples_to_corpus(s);
  REQUIRE(corpus.size() == 1);
  CHECK(corpus[0].id == "d/0");
  CHECK(validate_dialogue(corpus[0]).ok());

  std::vector<ScoreRecord> none;
  CHECK_THROWS_AS(make_samples(preds, none, View::ParserS), InvalidArgument);
  scores[0].arc.pop_back();
  scores[0].label.pop_back();
  CHECK_THROWS_AS(make_samples(preds, scores, View::ParserS), LengthMismatch);

  CHECK_THROWS_AS(read_samples("{\"dialog\":\"d\",\"utt\":0,\"view\":\"x\",\"c_arc\":1,\"c_label\":1,\"tokens\":[]}\n"),
                  FormatError);
  CHECK_THROWS_AS(read_samples("{\"dialog\":\"d\",\"utt\":0,\"view\":\"parser-S\",\"c_arc\":1,"
                               "\"c_label\":1,\"tokens\":[[\"a\",1,\"root\"]]}\n"),
                  FormatError);
}

TEST_CASE("view and dedup names") {
  CHECK(parse_view("parser-S") == View::ParserS);
  CHECK(view_name(View::ParserT) == "parser-T");
  CHECK_FALSE(parse_view("S"));
  CHECK(parse_dedup("mean") == DedupScore::Mean);
  CHECK_FALSE(parse_dedup("max"));
  CHECK(confidence_magnitude({0.9, 0.8}, DedupScore::Min) == 0.8);
  CHECK(confidence_magnitude({0.9, 0.8}, DedupScore::Mean) == doctest::Approx(0.85));
}
