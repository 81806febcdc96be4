#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dialdep {

// Closed two-family label inventory. Declaration order is the canonical
// inventory order: 21 syntactic labels followed by 19 inter-EDU labels.
enum class Label : std::uint8_t {
  // syntactic
  Root,
  SasubjObj,
  Sasubj,
  Dfsubj,
  Subj,
  SubjIn,
  Obj,
  Pred,
  Att,
  Adv,
  Cmp,
  Coo,
  Pobj,
  Iobj,
  De,
  Adjct,
  App,
  Exp,
  Punc,
  Frag,
  Repet,
  // inter-EDU
  Attr,
  Bckg,
  Cause,
  Comp,
  Cond,
  Cont,
  Elbr,
  Enbm,
  Eval,
  Expl,
  Joint,
  Manner,
  Rstm,
  Temp,
  TpChg,
  ProbSol,
  QstAns,
  StmRsp,
  ReqProc,
};

enum class LabelFamily { Syntactic, InterEdu };

inline constexpr std::size_t kSyntacticLabelCount = 21;
inline constexpr std::size_t kInterEduLabelCount = 19;
inline constexpr std::size_t kLabelCount = kSyntacticLabelCount + kInterEduLabelCount;

constexpr std::size_t label_index(Label l) { return static_cast<std::size_t>(l); }

constexpr LabelFamily label_family(Label l) {
  return label_index(l) < kSyntacticLabelCount ? LabelFamily::Syntactic
                                               : LabelFamily::InterEdu;
}

constexpr bool is_syntactic(Label l) { return label_family(l) == LabelFamily::Syntactic; }
constexpr bool is_inter_edu(Label l) { return label_family(l) == LabelFamily::InterEdu; }

std::string_view label_name(Label l);
std::optional<Label> parse_label(std::string_view name);
const std::array<Label, kLabelCount>& all_labels();
std::string_view family_name(LabelFamily f);

// An inter-EDU signal detected for an EDU: one of the 19 inter-EDU relations,
// or the reserved "greeting" pseudo-signal that drives the greeting rewrite.
// Ordering follows the inventory, with greeting last.
class Signal {
 public:
  static constexpr std::string_view kGreetingName = "greeting";

  // Precondition: l is inter-EDU.
  static Signal relation(Label l);
  static Signal greeting() { return Signal(true, Label::Elbr); }

  bool is_greeting() const { return greeting_; }
  Label relation_label() const { return relation_; }

  // Arc label written for this signal; greeting maps to `fallback`.
  Label as_label(Label fallback) const { return greeting_ ? fallback : relation_; }

  std::string_view name() const {
    return greeting_ ? kGreetingName : label_name(relation_);
  }

  friend bool operator==(const Signal&, const Signal&) = default;
  friend auto operator<=>(const Signal&, const Signal&) = default;

 private:
  Signal(bool greeting, Label l) : greeting_(greeting), relation_(l) {}

  bool greeting_;
  Label relation_;
};

// Accepts the 19 inter-EDU label names and `greeting_name`.
std::optional<Signal> parse_signal(std::string_view name,
                                   std::string_view greeting_name = Signal::kGreetingName);

}  // namespace dialdep
