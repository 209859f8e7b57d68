#include <doctest.h>

#include <random>

#include "elicit/errors.hpp"
#include "elicit/query.hpp"
#include "prompt_fixtures.hpp"

using namespace elicit;
using namespace elicit::testing;

TEST_SUITE("query") {

TEST_CASE("prompts match the reference strawberry texts") {
  CHECK(render_prompt(ReportColor{"strawberry"}) == kDirectPromptingStrawberry);
  CHECK(render_prompt(MatchJudgment{"strawberry", {300, 97, 48}}) == kDirectSamplingStrawberry);
  CHECK(render_prompt(PairwiseChoice{"strawberry", {0, 53, 12}, {274, 81, 47}}) == kMcmcStrawberry);
  CHECK(render_prompt(make_dimension_fill("strawberry", {270, 50, 33}, Dimension::Lightness)) ==
        kGibbsStrawberry);
}

TEST_CASE("fill prompt marks each missing dimension") {
  const auto hue = render_prompt(make_dimension_fill("lemon", {10, 20, 30}, Dimension::Hue));
  CHECK(hue.ends_with("Color: ['unknown', 20, 30]"));
  const auto sat = render_prompt(make_dimension_fill("lemon", {10, 20, 30}, Dimension::Saturation));
  CHECK(sat.ends_with("Color: [10, 'unknown', 30]"));
}

TEST_CASE("make_dimension_fill hides the missing coordinate") {
  const auto a = make_dimension_fill("x", {10, 20, 30}, Dimension::Saturation);
  const auto b = make_dimension_fill("x", {10, 99, 30}, Dimension::Saturation);
  CHECK(a == b);
}

TEST_CASE("parse_answer examples") {
  const PairwiseChoice pc{"x", {}, {}};
  CHECK(parse_answer(pc, "A") == Answer{ChoiceAnswer{Choice::A}});
  CHECK(parse_answer(pc, "B") == Answer{ChoiceAnswer{Choice::B}});
  CHECK(parse_answer(pc, "Option A") == Answer{ChoiceAnswer{Choice::A}});
  CHECK(parse_answer(pc, " option b.") == Answer{ChoiceAnswer{Choice::B}});
  CHECK_THROWS_AS(parse_answer(pc, "neither"), MalformedAnswer);

  const ReportColor rc{"x"};
  CHECK(parse_answer(rc, "0, 97, 44") == Answer{ColorCode{{0, 97, 44}}});
  CHECK(parse_answer(rc, "hsl(370, 50%, 50%)") == Answer{ColorCode{{10, 50, 50}}});
  CHECK_THROWS_AS(parse_answer(rc, "red"), MalformedAnswer);
  CHECK_THROWS_AS(parse_answer(rc, "1, 2"), MalformedAnswer);

  const MatchJudgment mj{"x", {}};
  CHECK(parse_answer(mj, "Yes.") == Answer{YesNo{true}});
  CHECK(parse_answer(mj, "no") == Answer{YesNo{false}});
  CHECK_THROWS_AS(parse_answer(mj, "maybe"), MalformedAnswer);

  const auto df = make_dimension_fill("x", {}, Dimension::Hue);
  CHECK(parse_answer(df, "42") == Answer{DimensionValue{42}});
  CHECK(parse_answer(df, "400") == Answer{DimensionValue{400}});
  CHECK_THROWS_AS(parse_answer(df, "1 or 2"), MalformedAnswer);
}

TEST_CASE("parse of canonical answer text is the identity") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const HslColor c = lattice_point(rng() % kLatticePoints);
    const Answer color = ColorCode{c};
    CHECK(parse_answer(ReportColor{"x"}, answer_text(color)) == color);
    const Answer yn = YesNo{(rng() & 1) != 0};
    CHECK(parse_answer(MatchJudgment{"x", c}, answer_text(yn)) == yn);
    const Answer ch = ChoiceAnswer{(rng() & 1) ? Choice::A : Choice::B};
    CHECK(parse_answer(PairwiseChoice{"x", c, c}, answer_text(ch)) == ch);
    const Dimension d = kAllDimensions[rng() % 3];
    const Answer v = DimensionValue{c[d]};
    CHECK(parse_answer(make_dimension_fill("x", c, d), answer_text(v)) == v);
  }
}

TEST_CASE("answer_matches pairs kinds") {
  CHECK(answer_matches(ReportColor{"x"}, ColorCode{}));
  CHECK_FALSE(answer_matches(ReportColor{"x"}, YesNo{}));
  CHECK(query_kind_name(PairwiseChoice{}) == "pairwise_choice");
}

}
