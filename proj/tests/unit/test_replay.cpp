#include <doctest.h>

#include "elicit/errors.hpp"
#include "elicit/replay.hpp"
#include "elicit/samplers.hpp"

using namespace elicit;

TEST_SUITE("replay") {

TEST_CASE("matching entry returns the recorded answer") {
  const PairwiseChoice q{"lemon", {1, 2, 3}, {4, 5, 6}};
  ReplayRespondent r({{q, ChoiceAnswer{Choice::B}, "Option B"}});
  Rng rng(0);
  const auto resp = r.answer(q, rng);
  CHECK(resp.answer == Answer{ChoiceAnswer{Choice::B}});
  CHECK(resp.raw == "Option B");
  CHECK(r.exhausted());
}

TEST_CASE("different query diverges") {
  const PairwiseChoice q{"lemon", {1, 2, 3}, {4, 5, 6}};
  Rng rng(0);
  ReplayRespondent swapped({{q, ChoiceAnswer{Choice::B}, "B"}});
  CHECK_THROWS_AS(swapped.answer(PairwiseChoice{"lemon", {4, 5, 6}, {1, 2, 3}}, rng), ReplayDivergence);
  ReplayRespondent kind({{q, ChoiceAnswer{Choice::B}, "B"}});
  CHECK_THROWS_AS(kind.answer(ReportColor{"lemon"}, rng), ReplayDivergence);
}

TEST_CASE("cursor at end is exhausted") {
  ReplayRespondent r({});
  Rng rng(0);
  CHECK_THROWS_AS(r.answer(ReportColor{"x"}, rng), ReplayExhausted);
}

TEST_CASE("direct prompting reproduces a transcript") {
  const std::vector<HslColor> colors{{0, 97, 44}, {350, 80, 50}, {10, 90, 40}};
  std::vector<ReplayEntry> entries;
  for (const auto& c : colors) entries.push_back({ReportColor{"strawberry"}, ColorCode{c}, answer_text(ColorCode{c})});
  ReplayRespondent r(entries);
  SamplerConfig cfg;
  cfg.method = Method::DirectPrompting;
  cfg.iterations = 3;
  auto ctx = make_chain_context("strawberry", 0, 0, 0);
  const auto out = run_direct_prompting(r, cfg, ctx);
  CHECK(out.samples == colors);
}

TEST_CASE("running past the transcript leaves the chain incomplete") {
  std::vector<ReplayEntry> entries{{ReportColor{"x"}, ColorCode{{1, 1, 1}}, "1, 1, 1"}};
  ReplayRespondent r(entries);
  SamplerConfig cfg;
  cfg.method = Method::DirectPrompting;
  cfg.iterations = 2;
  auto ctx = make_chain_context("x", 0, 0, 0);
  const auto out = run_direct_prompting(r, cfg, ctx);
  CHECK_FALSE(out.complete);
  CHECK(out.samples.size() == 1);
}

}
