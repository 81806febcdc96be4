#include "dialdep/labels.hpp"

#include <cassert>

namespace dialdep {

namespace {

constexpr std::array<std::string_view, kLabelCount> kNames = {
    "root",  "sasubj-obj", "sasubj", "dfsubj", "subj",   "subj-in",  "obj",
    "pred",  "att",        "adv",    "cmp",    "coo",    "pobj",     "iobj",
    "de",    "adjct",      "app",    "exp",    "punc",   "frag",     "repet",
    "attr",  "bckg",       "cause",  "comp",   "cond",   "cont",     "elbr",
    "enbm",  "eval",       "expl",   "joint",  "manner", "rstm",     "temp",
    "tp-chg", "prob-sol",  "qst-ans", "stm-rsp", "req-proc",
};

constexpr std::array<Label, kLabelCount> make_all() {
  std::array<Label, kLabelCount> out{};
  for (std::size_t i = 0; i < kLabelCount; ++i) out[i] = static_cast<Label>(i);
  return out;
}

constexpr std::array<Label, kLabelCount> kAll = make_all();

}  // namespace

std::string_view label_name(Label l) { return kNames[label_index(l)]; }

std::optional<Label> parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (kNames[i] == name) return static_cast<Label>(i);
  }
  return std::nullopt;
}

const std::array<Label, kLabelCount>& all_labels() { return kAll; }

std::string_view family_name(LabelFamily f) {
  return f == LabelFamily::Syntactic ? "syntactic" : "inter-edu";
}

Signal Signal::relation(Label l) {
  assert(is_inter_edu(l));
  return Signal(false, l);
}

std::optional<Signal> parse_signal(std::string_view name, std::string_view greeting_name) {
  if (name == greeting_name) return Signal::greeting();
  auto l = parse_label(name);
  if (!l || !is_inter_edu(*l)) return std::nullopt;
  return Signal::relation(*l);
}

}  // namespace dialdep
