#include "dialdep/config.hpp"

#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace dialdep {

namespace {

namespace pt = boost::property_tree;

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::set<Label> label_set(const std::string& s, const char* key) {
  std::set<Label> out;
  for (const auto& w : words(s)) {
    std::string name = w;
    // tolerate comma-separated lists as well
    std::size_t pos = 0;
    while (pos <= name.size()) {
      std::size_t comma = name.find(',', pos);
      std::string part = name.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!part.empty()) {
        auto l = parse_label(part);
        if (!l) throw InvalidArgument(std::string(key) + ": unknown label '" + part + "'");
        out.insert(*l);
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  return out;
}

Label one_label(const std::string& s, const char* key) {
  auto l = parse_label(s);
  if (!l) throw InvalidArgument(std::string(key) + ": unknown label '" + s + "'");
  return *l;
}

template <typename T>
T number(const pt::ptree& tree, const char* path, T fallback) {
  auto v = tree.get_optional<std::string>(path);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    T out;
    if constexpr (std::is_floating_point_v<T>) {
      out = static_cast<T>(std::stod(*v, &used));
    } else {
      out = static_cast<T>(std::stoll(*v, &used));
    }
    if (used != v->size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw InvalidArgument(std::string(path) + ": '" + *v + "' is not a number");
  }
}

}  // namespace

PipelineConfig load_config(std::string_view ini_text, PipelineConfig cfg) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(ini_text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }

  if (auto v = tree.get_optional<std::string>("segment.punctuation")) {
    auto w = words(*v);
    cfg.segment.punctuation = {w.begin(), w.end()};
  }
  if (auto v = tree.get_optional<std::string>("segment.implicit_labels")) {
    cfg.segment.implicit_labels = label_set(*v, "segment.implicit_labels");
  }
  cfg.segment.implicit_min_span =
      number<int>(tree, "segment.implicit_min_span", cfg.segment.implicit_min_span);
  if (auto v = tree.get_optional<std::string>("segment.utterance_boundaries")) {
    cfg.segment.utterance_boundaries = *v == "true" || *v == "1";
  }

  if (auto v = tree.get_optional<std::string>("transform.labels")) {
    cfg.transform.transforming = label_set(*v, "transform.labels");
  }
  cfg.transform.min_span = number<int>(tree, "transform.k", cfg.transform.min_span);
  if (auto v = tree.get_optional<std::string>("transform.reversal")) {
    cfg.transform.reversal = label_set(*v, "transform.reversal");
  }
  if (auto v = tree.get_optional<std::string>("transform.greeting")) {
    cfg.transform.greeting_name = *v;
  }
  if (auto v = tree.get_optional<std::string>("transform.tail_label")) {
    if (*v == "signal") {
      cfg.transform.tail_label = TailLabel::Signal;
    } else if (*v == "keep") {
      cfg.transform.tail_label = TailLabel::Keep;
    } else {
      throw InvalidArgument("transform.tail_label: expected 'signal' or 'keep'");
    }
  }
  if (auto v = tree.get_optional<std::string>("transform.greeting_label")) {
    cfg.transform.greeting_label = one_label(*v, "transform.greeting_label");
  }
  if (auto v = tree.get_optional<std::string>("transform.link_fallback")) {
    cfg.transform.link_fallback = one_label(*v, "transform.link_fallback");
  }

  cfg.epsilon = number<double>(tree, "selection.epsilon", cfg.epsilon);
  if (auto v = tree.get_optional<std::string>("selection.dedup")) {
    auto d = parse_dedup(*v);
    if (!d) throw InvalidArgument("selection.dedup: expected 'min' or 'mean'");
    cfg.dedup = *d;
  }
  cfg.iterations = number<int>(tree, "selection.iterations", cfg.iterations);
  cfg.seed = number<std::uint64_t>(tree, "run.seed", cfg.seed);

  cfg.segment.validate();
  cfg.transform.validate();
  if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0)) {
    throw InvalidArgument("selection.epsilon must lie in [0,1]");
  }
  if (cfg.iterations < 1) throw InvalidArgument("selection.iterations must be >= 1");
  return cfg;
}

}  // namespace dialdep
