#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "elicit/color.hpp"

namespace elicit {

// Queries a sampler can put to a respondent.

struct ReportColor {
  std::string object;
  friend bool operator==(const ReportColor&, const ReportColor&) = default;
};

struct MatchJudgment {
  std::string object;
  HslColor color;
  friend bool operator==(const MatchJudgment&, const MatchJudgment&) = default;
};

struct PairwiseChoice {
  std::string object;
  HslColor option_a;
  HslColor option_b;
  friend bool operator==(const PairwiseChoice&, const PairwiseChoice&) = default;
};

/// One coordinate of `known` is unknown; that coordinate is stored as 0.
struct DimensionFill {
  std::string object;
  HslColor known;
  Dimension missing = Dimension::Hue;
  friend bool operator==(const DimensionFill&, const DimensionFill&) = default;
};

DimensionFill make_dimension_fill(std::string object, const HslColor& current, Dimension missing);

using Query = std::variant<ReportColor, MatchJudgment, PairwiseChoice, DimensionFill>;

const std::string& query_object(const Query& q);
std::string_view query_kind_name(const Query& q);

// Answers, one per query kind in the same order.

enum class Choice { A, B };

struct ColorCode {
  HslColor color;
  friend bool operator==(const ColorCode&, const ColorCode&) = default;
};
struct YesNo {
  bool yes = false;
  friend bool operator==(const YesNo&, const YesNo&) = default;
};
struct ChoiceAnswer {
  Choice choice = Choice::A;
  friend bool operator==(const ChoiceAnswer&, const ChoiceAnswer&) = default;
};
/// Raw integer as given by the respondent; may fall outside the dimension's range.
struct DimensionValue {
  int value = 0;
  friend bool operator==(const DimensionValue&, const DimensionValue&) = default;
};

using Answer = std::variant<ColorCode, YesNo, ChoiceAnswer, DimensionValue>;

/// True when the answer alternative corresponds to the query alternative.
bool answer_matches(const Query& q, const Answer& a);

/// Prompt text sent to a language-model respondent.
std::string render_prompt(const Query& q);

/// Tolerant reply parser. Throws MalformedAnswer when nothing usable is found.
Answer parse_answer(const Query& q, std::string_view raw);

/// Canonical reply text for an answer ("h, s, l", "yes"/"no", "A"/"B", integer).
std::string answer_text(const Answer& a);

std::string format_color(const HslColor& c);  // "[h, s, l]"

}  // namespace elicit
