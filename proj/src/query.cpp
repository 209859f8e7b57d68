#include "elicit/query.hpp"

#include <cctype>
#include <cmath>
#include <regex>
#include <vector>

#include <fmt/format.h>

#include "elicit/errors.hpp"

namespace elicit {

DimensionFill make_dimension_fill(std::string object, const HslColor& current, Dimension missing) {
  return {std::move(object), current.with(missing, 0), missing};
}

const std::string& query_object(const Query& q) {
  return std::visit([](const auto& v) -> const std::string& { return v.object; }, q);
}

std::string_view query_kind_name(const Query& q) {
  static constexpr std::string_view names[] = {"report_color", "match_judgment", "pairwise_choice",
                                                "dimension_fill"};
  return names[q.index()];
}

bool answer_matches(const Query& q, const Answer& a) { return q.index() == a.index(); }

std::string format_color(const HslColor& c) { return fmt::format("[{}, {}, {}]", c.h, c.s, c.l); }

namespace {

constexpr std::string_view kReportPreamble =
    "You are a participant in a color judgment task. You will be asked to describe an object's "
    "color in each question. Your objective is to generate an apt color code in HSL format to "
    "match the given object as well as possible. Remember, it’s essential to answer the "
    "question with a single HSL code, even if the generated color or the object might seem "
    "unusual at times. Please limit your response to just the three values of the HSL code, for "
    "example, 'h, s, l'. What color matches the following object: ";

constexpr std::string_view kMatchPreamble =
    "You are a participant in a color judgment task. You will see a question about whether a "
    "color (represented in HSL format) matches an object. Simply answer either 'yes' or 'no' "
    "based on your interpretation of the object’s color in the question. Does the color ";

constexpr std::string_view kPairwisePreamble =
    "You are a participant in a color choice task. You will see a question with two color "
    "options in HSL format. Simply choose either Option A or Option B. Remember, it’s "
    "essential to pick one color that better matches the object in the question, even if the "
    "choices might seem unusual at times. Please limit your response to just 'A' or 'B'. Which "
    "color better matches the following object: ";

constexpr std::string_view kFillPreamble =
    "You are a participant in a color judgment task. You will see an object and a color code in "
    "HSL format, however, one dimension of the given HSL color code is unknown. Your objective is "
    "to assign an apt integer to the unknown dimension to make the HSL color code match the given "
    "object as well as possible. Remember, it’s essential to complete the color, even if the "
    "generated color might seem unusual at times. Please limit your response to just the value "
    "you'd like to assign to the unknown dimension. Adjust the unknown dimension of HSL color to "
    "match the following object as well as possible: ";

std::string fill_coordinates(const DimensionFill& q) {
  std::vector<std::string> parts;
  for (Dimension d : kAllDimensions) {
    parts.push_back(d == q.missing ? std::string("'unknown'") : std::to_string(q.known[d]));
  }
  return fmt::format("[{}]", fmt::join(parts, ", "));
}

struct PromptRenderer {
  std::string operator()(const ReportColor& q) const {
    return fmt::format("{}{}.", kReportPreamble, q.object);
  }
  std::string operator()(const MatchJudgment& q) const {
    return fmt::format("{}{} match the following object: {}?", kMatchPreamble,
                       format_color(q.color), q.object);
  }
  std::string operator()(const PairwiseChoice& q) const {
    return fmt::format("{}{}. Option A{} or Option B{}?", kPairwisePreamble, q.object,
                       format_color(q.option_a), format_color(q.option_b));
  }
  std::string operator()(const DimensionFill& q) const {
    return fmt::format("{}{}. Color: {}", kFillPreamble, q.object, fill_coordinates(q));
  }
};

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string trim_punct(std::string_view text) {
  auto junk = [](unsigned char ch) { return std::isspace(ch) || std::ispunct(ch); };
  std::size_t b = 0, e = text.size();
  while (b < e && junk(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && junk(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

std::vector<double> numbers_in(std::string_view text) {
  static const std::regex number(R"(-?\d+(?:\.\d+)?)");
  std::vector<double> out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator(); ++it) {
    out.push_back(std::stod(it->str()));
  }
  return out;
}

[[noreturn]] void malformed(const Query& q, std::string_view raw) {
  throw MalformedAnswer(fmt::format("cannot parse {} reply: \"{}\"", query_kind_name(q), raw));
}

}  // namespace

std::string render_prompt(const Query& q) { return std::visit(PromptRenderer{}, q); }

Answer parse_answer(const Query& q, std::string_view raw) {
  switch (q.index()) {
    case 0: {
      const auto values = numbers_in(raw);
      if (values.size() != 3) malformed(q, raw);
      return ColorCode{canonicalize(values[0], values[1], values[2])};
    }
    case 1: {
      static const std::regex word(R"(^([a-z]+))");
      const std::string body = lowercase(trim_punct(raw));
      std::smatch m;
      if (std::regex_search(body, m, word)) {
        if (m[1] == "yes") return YesNo{true};
        if (m[1] == "no") return YesNo{false};
      }
      malformed(q, raw);
    }
    case 2: {
      static const std::regex option(R"(\boption\s*([ab])\b)");
      const std::string body = lowercase(trim_punct(raw));
      std::smatch m;
      if (body == "a" || body == "b") return ChoiceAnswer{body == "a" ? Choice::A : Choice::B};
      if (std::regex_search(body, m, option)) {
        return ChoiceAnswer{m[1] == "a" ? Choice::A : Choice::B};
      }
      malformed(q, raw);
    }
    default: {
      const auto values = numbers_in(raw);
      if (values.size() != 1) malformed(q, raw);
      return DimensionValue{static_cast<int>(std::round(values[0]))};
    }
  }
}

std::string answer_text(const Answer& a) {
  struct Visitor {
    std::string operator()(const ColorCode& v) const {
      return fmt::format("{}, {}, {}", v.color.h, v.color.s, v.color.l);
    }
    std::string operator()(const YesNo& v) const { return v.yes ? "yes" : "no"; }
    std::string operator()(const ChoiceAnswer& v) const { return v.choice == Choice::A ? "A" : "B"; }
    std::string operator()(const DimensionValue& v) const { return std::to_string(v.value); }
  };
  return std::visit(Visitor{}, a);
}

}  // namespace elicit
