#include <doctest.h>

#include "dialdep/io.hpp"
#include "generators.hpp"

using namespace dialdep;

namespace {

std::string fixture(const char* name) { return read_file(std::string(DIALDEP_FIXTURES) + "/" + name); }

const char* kOneUtterance =
    "# dialog = x\n"
    "# utt = 0\n"
    "# speaker = A\n"
    "1\t我\t2\tsubj\t_\t_\n"
    "2\t想\t0\troot\t_\t_\n"
    "\n";

Matrix one_hot_rows(int n, int width, int hot) {
  Matrix m(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(width), 0.0));
  for (auto& r : m) r[static_cast<std::size_t>(hot)] = 1.0;
  return m;
}

}  // namespace

TEST_CASE("read canonical single utterance") {
  auto ds = read_dialogues(kOneUtterance);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].id == "x");
  REQUIRE(ds[0].utterances.size() == 1);
  const auto& u = ds[0].utterances[0];
  CHECK(u.speaker == "A");
  CHECK(u.tokens[0] == Token{1, "我", 2, Label::Subj});
  CHECK(u.tokens[1] == Token{2, "想", 0, Label::Root});
  CHECK(write_dialogues(ds) == kOneUtterance);
}

TEST_CASE("format errors carry the line") {
  SUBCASE("unknown label") {
    std::string doc = kOneUtterance;
    doc.replace(doc.find("subj"), 4, "foo");
    try {
      read_dialogues(doc);
      FAIL("expected UnknownLabel");
    } catch (const UnknownLabel& e) {
      CHECK(e.line() == 4);
      CHECK(e.name() == "foo");
    }
  }
  SUBCASE("GHEAD on a non-root token") {
    std::string doc = kOneUtterance;
    doc.replace(doc.find("subj\t_\t_"), 8, "subj\t0:1\tstm-rsp");
    try {
      read_dialogues(doc);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.line() == 4);
    }
  }
  SUBCASE("column count") {
    CHECK_THROWS_AS(read_dialogues("# dialog = x\n# utt = 0\n1\ta\t0\troot\n"), FormatError);
  }
  SUBCASE("token before utterance header") {
    CHECK_THROWS_AS(read_dialogues("# dialog = x\n1\ta\t0\troot\t_\t_\n"), FormatError);
  }
  SUBCASE("half a link") {
    CHECK_THROWS_AS(read_dialogues("# dialog = x\n# utt = 0\n1\ta\t0\troot\t0:1\t_\n"), FormatError);
  }
  SUBCASE("invalid tree") {
    CHECK_THROWS_AS(read_dialogues("# dialog = x\n# utt = 0\n1\ta\t2\troot\t_\t_\n2\tb\t1\tobj\t_\t_\n"),
                    ValidationError);
  }
  SUBCASE("unlinked second utterance") {
    std::string doc = std::string(kOneUtterance) + "# utt = 1\n# speaker = B\n1\t好\t0\troot\t_\t_\n\n";
    CHECK_THROWS_AS(read_dialogues(doc), ValidationError);
    CHECK(read_dialogues(doc, LinkPolicy::Optional).size() == 1);
  }
}

TEST_CASE("fixture files round-trip byte for byte") {
  for (const char* name : {"mini.cddt", "svc_pred.cddt", "svc_gold.cddt"}) {
    auto text = fixture(name);
    CHECK(write_dialogues(read_dialogues(text)) == text);
  }
}

TEST_CASE("writer rejects unencodable values") {
  auto ds = read_dialogues(kOneUtterance);
  ds[0].utterances[0].tokens[0].form = "a\tb";
  CHECK_THROWS_AS(write_dialogues(ds), InvalidArgument);
}

TEST_CASE("property: read after write is value identity") {
  testgen::Rng rng(3);
  std::vector<Dialogue> corpus;
  for (int k = 0; k < 100; ++k) corpus.push_back(testgen::random_dialogue(rng, "r" + std::to_string(k)));
  auto back = read_dialogues(write_dialogues(corpus));
  CHECK(back == corpus);
}

TEST_CASE("score records") {
  ScoreRecord rec{"d", 0, one_hot_rows(2, 3, 0), one_hot_rows(2, 40, 5)};
  check_score_record(rec);
  std::vector<ScoreRecord> recs{rec};
  auto text = write_scores(recs);
  CHECK(read_scores(text) == recs);

  SUBCASE("row not stochastic") {
    rec.arc[1] = {0.5, 0.5, 0.1};
    try {
      check_score_record(rec);
      FAIL("expected RowNotStochastic");
    } catch (const RowNotStochastic& e) {
      CHECK(e.row() == 1);
    }
  }
  SUBCASE("width") {
    rec.label[0].pop_back();
    CHECK_THROWS_AS(check_score_record(rec), InvalidArgument);
  }
  SUBCASE("negative entry") {
    rec.arc[0] = {1.2, -0.2, 0.0};
    CHECK_THROWS_AS(check_score_record(rec), RowNotStochastic);
  }
  SUBCASE("reader reports the line") {
    auto bad = text + "{\"dialog\":\"d\",\"utt\":1,\"arc\":[[0.5,0.5,0.1]],\"label\":[]}\n";
    CHECK_THROWS_AS(read_scores(bad), Error);
    CHECK_THROWS_AS(read_scores("{not json}\n"), FormatError);
  }
}

TEST_CASE("nine significant digits keep argmax stable") {
  testgen::Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const int n = rng.uniform(1, 6);
    ScoreRecord rec{"d", 0, {}, one_hot_rows(n, 40, 0)};
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(static_cast<std::size_t>(n) + 1);
      double sum = 0.0;
      for (auto& x : row) sum += (x = rng.real(0.0, 1.0));
      for (auto& x : row) x /= sum;
      rec.arc.push_back(row);
    }
    std::vector<ScoreRecord> recs{rec};
    auto back = read_scores(write_scores(recs));
    for (int i = 0; i < n; ++i) {
      const auto& a = rec.arc[static_cast<std::size_t>(i)];
      const auto& b = back[0].arc[static_cast<std::size_t>(i)];
      CHECK(std::max_element(a.begin(), a.end()) - a.begin() ==
            std::max_element(b.begin(), b.end()) - b.begin());
    }
    CHECK(write_scores(back) == write_scores(recs));
  }
}

TEST_CASE("lexicon") {
  auto lex = read_lexicon("# comment\n如果\tcond\n\n看\tattr\n你好\tgreeting\n");
  CHECK(lex.size() == 3);
  CHECK(*lex.find("如果") == Signal::relation(Label::Cond));
  CHECK(lex.find("你好")->is_greeting());
  CHECK(read_lexicon(write_lexicon(lex)).entries() == lex.entries());
  CHECK_THROWS_AS(read_lexicon("如果\tfoo\n"), UnknownLabel);
  CHECK_THROWS_AS(read_lexicon("如果\tsubj\n"), FormatError);
  CHECK_THROWS_AS(read_lexicon("如果\tcond\n如果\tattr\n"), FormatError);
  CHECK_THROWS_AS(read_lexicon("如果 cond\n"), FormatError);
  CHECK(read_lexicon("hi\thello\n", "hello").find("hi")->is_greeting());
}

TEST_CASE("signal distributions") {
  const std::string doc =
      "{\"dialog\":\"d\",\"utt\":0,\"start\":1,\"end\":2,\"signals\":{\"attr\":0.25,\"cond\":0.75}}\n"
      "{\"dialog\":\"d\",\"utt\":0,\"start\":3,\"end\":3,\"words\":{\"如果\":0.2,\"看\":0.1,\"若\":0.4}}\n";
  auto recs = read_signal_distributions(doc);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].span == EduSpan{0, 1, 2});
  CHECK(recs[0].signals->at(Signal::relation(Label::Cond)) == 0.75);
  CHECK(recs[1].words->at("若") == 0.4);
  CHECK(write_signal_distributions(recs) == doc);

  auto lex = read_lexicon("若\tcond\n如果\tcond\n看\tattr\n");
  auto table = distribution_table(recs, &lex);
  auto& grouped = table.at(EduKey{"d", 0, 3, 3});
  CHECK(grouped.at(Signal::relation(Label::Cond)) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(distribution_table(recs, nullptr), InvalidArgument);

  CHECK_THROWS_AS(read_signal_distributions(
                      "{\"dialog\":\"d\",\"utt\":0,\"start\":1,\"end\":1,\"signals\":{\"cond\":0.5}}\n"),
                  FormatError);
  CHECK_THROWS_AS(read_signal_distributions("{\"dialog\":\"d\",\"utt\":0,\"start\":1,\"end\":1}\n"),
                  FormatError);
}

TEST_CASE("segmentation files") {
  std::vector<UtteranceSegmentation> segs{{"d", 0, {{0, 1, 2}, {0, 3, 4}}}, {"d", 1, {{1, 1, 1}}}};
  auto text = write_segmentations(segs);
  CHECK(text == "{\"dialog\":\"d\",\"utt\":0,\"edus\":[[1,2],[3,4]]}\n"
                "{\"dialog\":\"d\",\"utt\":1,\"edus\":[[1,1]]}\n");
  CHECK(read_segmentations(text) == segs);
}

TEST_CASE("round_to_precision") {
  CHECK(round_to_precision(0.1 + 0.2) == 0.3);
  CHECK(round_to_precision(1.0 / 3.0) == 0.333333333);
}
