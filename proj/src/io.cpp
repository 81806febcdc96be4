#include "dialdep/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dialdep {

using ojson = nlohmann::ordered_json;

namespace {

// Splits on '\n'; a trailing newline does not produce an extra empty line.
std::vector<std::string_view> split_lines(std::string_view doc) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < doc.size()) {
    std::size_t nl = doc.find('\n', pos);
    if (nl == std::string_view::npos) nl = doc.size();
    std::string_view line = doc.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

// "# key = value" -> value, or nullopt when the line is not that header.
std::optional<std::string_view> header_value(std::string_view line, std::string_view key) {
  std::string prefix = "# " + std::string(key) + " =";
  if (line.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string_view rest = line.substr(prefix.size());
  if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  return rest;
}

Label require_label(std::string_view name, std::size_t line) {
  auto l = parse_label(name);
  if (!l) throw UnknownLabel(line, std::string(name));
  return *l;
}

void check_plain(std::string_view s, std::string_view what) {
  if (s.find_first_of("\t\n\r") != std::string_view::npos) {
    throw InvalidArgument(std::string(what) + " contains a tab or newline: '" + std::string(s) +
                          "'");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

double round_to_precision(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_double(v).c_str(), nullptr);
}

// ---------------------------------------------------------------------------
// dialogue format

std::vector<Dialogue> read_dialogues(std::string_view document, LinkPolicy policy) {
  std::vector<Dialogue> out;
  Dialogue* dlg = nullptr;
  Utterance* utt = nullptr;
  bool utt_closed = true;

  const auto lines = split_lines(document);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::size_t ln = k + 1;
    const std::string_view line = lines[k];

    if (is_blank(line)) {
      utt_closed = true;
      continue;
    }
    if (line.front() == '#') {
      if (auto v = header_value(line, "dialog")) {
        if (v->empty()) throw FormatError(ln, "empty dialogue id");
        out.push_back(Dialogue{std::string(*v), {}, {}});
        dlg = &out.back();
        utt = nullptr;
        utt_closed = true;
      } else if (auto v = header_value(line, "utt")) {
        if (!dlg) throw FormatError(ln, "utterance header before any '# dialog' header");
        auto idx = parse_int(*v);
        if (!idx) throw FormatError(ln, "utterance index '" + std::string(*v) + "' is not an integer");
        dlg->utterances.push_back(Utterance{*idx, {}, {}});
        utt = &dlg->utterances.back();
        utt_closed = false;
      } else if (auto v = header_value(line, "speaker")) {
        if (!utt || utt_closed) throw FormatError(ln, "speaker header outside an utterance");
        if (!utt->tokens.empty()) throw FormatError(ln, "speaker header after token lines");
        utt->speaker = std::string(*v);
      } else {
        throw FormatError(ln, "unknown header line");
      }
      continue;
    }

    if (!utt || utt_closed) throw FormatError(ln, "token line outside an utterance");
    auto cols = split(line, '\t');
    if (cols.size() != 6) {
      throw FormatError(ln, "expected 6 tab-separated columns, found " + std::to_string(cols.size()));
    }
    auto idx = parse_int(cols[0]);
    if (!idx) throw FormatError(ln, "token index '" + std::string(cols[0]) + "' is not an integer");
    if (cols[1].empty()) throw FormatError(ln, "empty FORM");
    auto head = parse_int(cols[2]);
    if (!head) throw FormatError(ln, "head '" + std::string(cols[2]) + "' is not an integer");
    Token tok{*idx, std::string(cols[1]), *head, require_label(cols[3], ln)};

    const bool has_ghead = cols[4] != "_";
    const bool has_grel = cols[5] != "_";
    if (has_ghead != has_grel) throw FormatError(ln, "GHEAD and GREL must both be set or both be '_'");
    if (has_ghead) {
      if (tok.head != 0) throw FormatError(ln, "GHEAD on a non-root token");
      auto parts = split(cols[4], ':');
      std::optional<int> hu, ht;
      if (parts.size() == 2) {
        hu = parse_int(parts[0]);
        ht = parse_int(parts[1]);
      }
      if (!hu || !ht) throw FormatError(ln, "GHEAD '" + std::string(cols[4]) + "' is not u:t");
      dlg->links.push_back({Coord{*hu, *ht}, Coord{utt->index, tok.index}, require_label(cols[5], ln)});
    }
    utt->tokens.push_back(std::move(tok));
  }

  for (const auto& d : out) {
    auto report = validate_dialogue(d, policy);
    if (!report.ok()) throw ValidationError(d.id, std::move(report));
  }
  return out;
}

std::string write_dialogues(std::span<const Dialogue> dialogues) {
  std::ostringstream os;
  for (const auto& d : dialogues) {
    check_plain(d.id, "dialogue id");
    for (const auto& l : d.links) {
      const bool ok = l.tail.utterance >= 0 &&
                      l.tail.utterance < static_cast<int>(d.utterances.size()) &&
                      l.tail.token >= 1 &&
                      l.tail.token <= static_cast<int>(
                          d.utterances[static_cast<std::size_t>(l.tail.utterance)].size()) &&
                      d.utterances[static_cast<std::size_t>(l.tail.utterance)]
                              .tokens[static_cast<std::size_t>(l.tail.token - 1)]
                              .head == 0;
      if (!ok) {
        throw InvalidDialogue("dialogue '" + d.id + "': link tail " +
                              std::to_string(l.tail.utterance) + ":" +
                              std::to_string(l.tail.token) + " is not a root token");
      }
    }
    os << "# dialog = " << d.id << '\n';
    for (std::size_t u = 0; u < d.utterances.size(); ++u) {
      const auto& utt = d.utterances[u];
      check_plain(utt.speaker, "speaker");
      os << "# utt = " << utt.index << '\n';
      os << "# speaker = " << utt.speaker << '\n';
      for (const auto& t : utt.tokens) {
        check_plain(t.form, "form");
        os << t.index << '\t' << t.form << '\t' << t.head << '\t' << label_name(t.label) << '\t';
        const InterUtteranceLink* link = nullptr;
        for (const auto& l : d.links) {
          if (l.tail.utterance == static_cast<int>(u) && l.tail.token == t.index) link = &l;
        }
        if (link) {
          os << link->head.utterance << ':' << link->head.token << '\t' << label_name(link->label);
        } else {
          os << "_\t_";
        }
        os << '\n';
      }
      os << '\n';
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON-lines helpers

namespace {

template <typename F>
void for_each_json_line(std::string_view document, F&& f) {
  const auto lines = split_lines(document);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (is_blank(lines[k])) continue;
    ojson j;
    try {
      j = ojson::parse(lines[k]);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(k + 1, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw FormatError(k + 1, "record is not a JSON object");
    try {
      f(j, k + 1);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(k + 1, e.what());
    }
  }
}

const ojson& field(const ojson& j, const char* name, std::size_t line) {
  auto it = j.find(name);
  if (it == j.end()) throw FormatError(line, std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const ojson& j, const char* name, std::size_t line) {
  const auto& v = field(j, name, line);
  if (!v.is_string()) throw FormatError(line, std::string("field '") + name + "' is not a string");
  return v.get<std::string>();
}

int int_field(const ojson& j, const char* name, std::size_t line) {
  const auto& v = field(j, name, line);
  if (!v.is_number_integer()) {
    throw FormatError(line, std::string("field '") + name + "' is not an integer");
  }
  return v.get<int>();
}

double number(const ojson& v, std::size_t line) {
  if (!v.is_number()) throw FormatError(line, "expected a number");
  return v.get<double>();
}

Matrix matrix_field(const ojson& j, const char* name, std::size_t line) {
  const auto& v = field(j, name, line);
  if (!v.is_array()) throw FormatError(line, std::string("field '") + name + "' is not an array");
  Matrix m;
  for (const auto& row : v) {
    if (!row.is_array()) throw FormatError(line, std::string("field '") + name + "' has a non-array row");
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& x : row) r.push_back(number(x, line));
    m.push_back(std::move(r));
  }
  return m;
}

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (const auto& row : m) {
    ojson r = ojson::array();
    for (double x : row) r.push_back(round_to_precision(x));
    rows.push_back(std::move(r));
  }
  return rows;
}

void check_rows(const Matrix& m, std::size_t width, const char* name) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != width) {
      throw InvalidArgument(std::string(name) + " row " + std::to_string(i) + " has " +
                            std::to_string(m[i].size()) + " columns, expected " +
                            std::to_string(width));
    }
    double sum = 0.0;
    for (double x : m[i]) {
      if (!(x >= 0.0 && x <= 1.0)) {
        throw RowNotStochastic(i, std::string(name) + " entry " + format_double(x) +
                                      " outside [0,1]");
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      throw RowNotStochastic(i, std::string(name) + " row sums to " + format_double(sum));
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// scores

void check_score_record(const ScoreRecord& rec) {
  const std::size_t n = rec.arc.size();
  if (rec.label.size() != n) {
    throw InvalidArgument("arc matrix has " + std::to_string(n) + " rows, label matrix has " +
                          std::to_string(rec.label.size()));
  }
  check_rows(rec.arc, n + 1, "arc");
  check_rows(rec.label, kLabelCount, "label");
}

std::vector<ScoreRecord> read_scores(std::string_view document) {
  std::vector<ScoreRecord> out;
  for_each_json_line(document, [&](const ojson& j, std::size_t line) {
    ScoreRecord rec{string_field(j, "dialog", line), int_field(j, "utt", line),
                    matrix_field(j, "arc", line), matrix_field(j, "label", line)};
    try {
      check_score_record(rec);
    } catch (const RowNotStochastic& e) {
      throw RowNotStochastic(e.row(), e.detail() + " (line " + std::to_string(line) + ")");
    } catch (const InvalidArgument& e) {
      throw FormatError(line, e.what());
    }
    out.push_back(std::move(rec));
  });
  return out;
}

std::string write_scores(std::span<const ScoreRecord> records) {
  std::string out;
  for (const auto& rec : records) {
    ojson j;
    j["dialog"] = rec.dialogue;
    j["utt"] = rec.utterance;
    j["arc"] = matrix_json(rec.arc);
    j["label"] = matrix_json(rec.label);
    out += j.dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// lexicon

SignalLexicon read_lexicon(std::string_view document, std::string_view greeting_name) {
  SignalLexicon lex;
  const auto lines = split_lines(document);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::size_t ln = k + 1;
    std::string_view line = lines[k];
    if (is_blank(line) || line.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2) {
      throw FormatError(ln, "expected 'word<TAB>signal', found " + std::to_string(cols.size()) +
                                " columns");
    }
    if (cols[0].empty()) throw FormatError(ln, "empty signal word");
    auto sig = parse_signal(cols[1], greeting_name);
    if (!sig) {
      auto l = parse_label(cols[1]);
      if (!l) throw UnknownLabel(ln, std::string(cols[1]));
      throw FormatError(ln, "'" + std::string(cols[1]) + "' is not an inter-EDU signal");
    }
    if (lex.find(cols[0])) {
      throw FormatError(ln, "duplicate signal word '" + std::string(cols[0]) + "'");
    }
    lex.add(std::string(cols[0]), *sig);
  }
  return lex;
}

std::string write_lexicon(const SignalLexicon& lex) {
  std::string out;
  for (const auto& [word, sig] : lex.entries()) {
    out += word;
    out += '\t';
    out += sig.name();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// signal distributions

std::vector<SignalDistributionRecord> read_signal_distributions(std::string_view document) {
  std::vector<SignalDistributionRecord> out;
  for_each_json_line(document, [&](const ojson& j, std::size_t line) {
    SignalDistributionRecord rec;
    rec.dialogue = string_field(j, "dialog", line);
    rec.span = EduSpan{int_field(j, "utt", line), int_field(j, "start", line),
                       int_field(j, "end", line)};
    if (rec.span.start < 1 || rec.span.end < rec.span.start) {
      throw FormatError(line, "invalid EDU bounds");
    }
    const bool has_signals = j.contains("signals");
    const bool has_words = j.contains("words");
    if (has_signals == has_words) {
      throw FormatError(line, "record must carry exactly one of 'signals' or 'words'");
    }
    if (has_signals) {
      const auto& obj = j["signals"];
      if (!obj.is_object()) throw FormatError(line, "'signals' is not an object");
      SignalDistribution dist;
      double sum = 0.0;
      for (auto it = obj.begin(); it != obj.end(); ++it) {
        auto sig = parse_signal(it.key());
        if (!sig) {
          if (!parse_label(it.key())) throw UnknownLabel(line, it.key());
          throw FormatError(line, "'" + it.key() + "' is not an inter-EDU signal");
        }
        const double p = number(it.value(), line);
        if (!(p >= 0.0 && p <= 1.0)) throw FormatError(line, "probability outside [0,1]");
        dist[*sig] = p;
        sum += p;
      }
      if (std::abs(sum - 1.0) > kStochasticTolerance) {
        throw FormatError(line, "signal distribution sums to " + format_double(sum));
      }
      rec.signals = std::move(dist);
    } else {
      const auto& obj = j["words"];
      if (!obj.is_object()) throw FormatError(line, "'words' is not an object");
      WordDistribution wd;
      for (auto it = obj.begin(); it != obj.end(); ++it) {
        const double p = number(it.value(), line);
        if (!(p >= 0.0 && p <= 1.0)) throw FormatError(line, "probability outside [0,1]");
        wd[it.key()] = p;
      }
      rec.words = std::move(wd);
    }
    out.push_back(std::move(rec));
  });
  return out;
}

std::string write_signal_distributions(std::span<const SignalDistributionRecord> records) {
  std::string out;
  for (const auto& rec : records) {
    ojson j;
    j["dialog"] = rec.dialogue;
    j["utt"] = rec.span.utterance;
    j["start"] = rec.span.start;
    j["end"] = rec.span.end;
    if (rec.signals) {
      ojson obj = ojson::object();
      for (const auto& [sig, p] : *rec.signals) obj[std::string(sig.name())] = round_to_precision(p);
      j["signals"] = std::move(obj);
    } else {
      ojson obj = ojson::object();
      if (rec.words) {
        for (const auto& [w, p] : *rec.words) obj[w] = round_to_precision(p);
      }
      j["words"] = std::move(obj);
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::map<EduKey, SignalDistribution> distribution_table(
    std::span<const SignalDistributionRecord> records, const SignalLexicon* lex) {
  std::map<EduKey, SignalDistribution> table;
  for (const auto& rec : records) {
    EduKey key{rec.dialogue, rec.span.utterance, rec.span.start, rec.span.end};
    if (rec.signals) {
      table[key] = *rec.signals;
    } else {
      if (!lex) throw InvalidArgument("word distributions require a signal lexicon");
      table[key] = group_mean(*rec.words, *lex);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// EDU span files

std::vector<UtteranceSegmentation> read_segmentations(std::string_view document) {
  std::vector<UtteranceSegmentation> out;
  for_each_json_line(document, [&](const ojson& j, std::size_t line) {
    UtteranceSegmentation seg{string_field(j, "dialog", line), int_field(j, "utt", line), {}};
    const auto& edus = field(j, "edus", line);
    if (!edus.is_array()) throw FormatError(line, "'edus' is not an array");
    for (const auto& e : edus) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        throw FormatError(line, "EDU must be [start, end]");
      }
      seg.edus.push_back({seg.utterance, e[0].get<int>(), e[1].get<int>()});
    }
    out.push_back(std::move(seg));
  });
  return out;
}

std::string write_segmentations(std::span<const UtteranceSegmentation> segs) {
  std::string out;
  for (const auto& s : segs) {
    ojson j;
    j["dialog"] = s.dialogue;
    j["utt"] = s.utterance;
    ojson edus = ojson::array();
    for (const auto& e : s.edus) edus.push_back(ojson::array({e.start, e.end}));
    j["edus"] = std::move(edus);
    out += j.dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace dialdep
