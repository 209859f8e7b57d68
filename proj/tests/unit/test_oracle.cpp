#include <doctest.h>

#include <cmath>
#include <memory>
#include <numeric>

#include "elicit/errors.hpp"
#include "elicit/oracle.hpp"
#include "support.hpp"

using namespace elicit;
using namespace elicit::testing;

namespace {

/// Target with density 1 at a, 3 at b and nothing elsewhere.
std::shared_ptr<const Target> two_point(const HslColor& a, const HslColor& b) {
  return std::make_shared<TabulatedTarget>(TabulatedTarget::from_function([=](const HslColor& c) {
    if (c == a) return 1.0;
    if (c == b) return 3.0;
    return 0.0;
  }));
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("Barker probabilities") {
  const HslColor a{10, 10, 10}, b{20, 20, 20}, z{30, 30, 30};
  OracleRespondent oracle(two_point(a, b));
  CHECK(oracle.choice_b_probability(a, b) == doctest::Approx(0.75));
  CHECK(oracle.choice_b_probability(b, a) == doctest::Approx(0.25));
  CHECK(oracle.choice_b_probability(a, a) == 0.5);
  CHECK(oracle.choice_b_probability(z, z) == 0.5);
  CHECK(oracle.choice_b_probability(z, a) == 1.0);
}

TEST_CASE("Barker frequency within three binomial sigma") {
  const HslColor a{10, 10, 10}, b{20, 20, 20};
  OracleRespondent oracle(two_point(a, b));
  Rng rng(99);
  for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}, std::pair{a, a}}) {
    const double p = oracle.choice_b_probability(x, y);
    int count_b = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto r = oracle.answer(PairwiseChoice{"x", x, y}, rng);
      count_b += std::get<ChoiceAnswer>(r.answer).choice == Choice::B;
    }
    CHECK(std::abs(count_b / 10000.0 - p) <= 3.0 * std::sqrt(p * (1 - p) / 10000.0));
  }
}

TEST_CASE("match judgment is certain at the mode") {
  auto target = std::make_shared<MixtureTarget>(single_gaussian(100, 50, 50, 15, 10, 10));
  OracleRespondent oracle(target);
  CHECK(oracle.match_probability({100, 50, 50}) == doctest::Approx(1.0));
  CHECK(oracle.match_probability({100, 60, 50}) == doctest::Approx(std::exp(-0.5)));
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    CHECK(std::get<YesNo>(oracle.answer(MatchJudgment{"x", {100, 50, 50}}, rng).answer).yes);
  }
}

TEST_CASE("threshold match rule") {
  auto target = std::make_shared<MixtureTarget>(single_gaussian(100, 50, 50, 15, 10, 10));
  OracleRespondent oracle(target, MatchRule::Threshold, 0.5);
  CHECK(oracle.match_probability({100, 50, 50}) == 1.0);
  CHECK(oracle.match_probability({100, 60, 50}) == 1.0);  // exp(-0.5) > 0.5
  CHECK(oracle.match_probability({100, 70, 50}) == 0.0);  // exp(-2) < 0.5
}

TEST_CASE("fill on a point mass returns the point coordinate") {
  const HslColor p{123, 45, 67};
  OracleRespondent oracle(std::make_shared<MixtureTarget>(point_mass(p)));
  Rng rng(4);
  for (Dimension d : kAllDimensions) {
    for (int i = 0; i < 20; ++i) {
      const auto q = make_dimension_fill("x", p, d);
      CHECK(std::get<DimensionValue>(oracle.answer(q, rng).answer).value == p[d]);
    }
  }
  for (int i = 0; i < 20; ++i) CHECK(std::get<ColorCode>(oracle.answer(ReportColor{"x"}, rng).answer).color == p);
}

TEST_CASE("fill off a point mass still points at its coordinate") {
  OracleRespondent oracle(std::make_shared<MixtureTarget>(point_mass({123, 45, 67})));
  const auto dist = oracle.fill_distribution(make_dimension_fill("x", {0, 0, 0}, Dimension::Hue));
  CHECK(dist[123] == doctest::Approx(1.0));
}

TEST_CASE("fill along a zero-density line falls back to uniform") {
  OracleRespondent oracle(two_point({10, 10, 10}, {20, 20, 20}));
  const auto dist = oracle.fill_distribution(make_dimension_fill("x", {0, 0, 0}, Dimension::Hue));
  REQUIRE(dist.size() == 360);
  for (double p : dist) CHECK(p == doctest::Approx(1.0 / 360));
}

TEST_CASE("fill frequencies converge to the enumerated conditional") {
  auto target = std::make_shared<MixtureTarget>(TargetSpec{{
      GaussianComponent{0.6, {30, 60, 40}, {12, 8, 9}},
      GaussianComponent{0.4, {200, 30, 70}, {20, 15, 6}},
  }});
  OracleRespondent oracle(target);
  Rng rng(17);
  const HslColor known{35, 55, 45};
  for (Dimension d : kAllDimensions) {
    const auto q = make_dimension_fill("x", known, d);
    // Independent oracle: normalize exp(log_density) along the line.
    std::vector<double> expected(static_cast<std::size_t>(lattice_size(d)));
    for (int v = 0; v < lattice_size(d); ++v) expected[v] = std::exp(target->log_density(known.with(d, v)));
    const double z = std::accumulate(expected.begin(), expected.end(), 0.0);
    for (double& e : expected) e /= z;
    const auto dist = oracle.fill_distribution(q);
    for (std::size_t v = 0; v < expected.size(); ++v) CHECK(dist[v] == doctest::Approx(expected[v]).epsilon(1e-9));

    std::vector<double> counts(expected.size(), 0.0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) counts[std::get<DimensionValue>(oracle.answer(q, rng).answer).value] += 1.0;
    double tv = 0;
    for (std::size_t v = 0; v < expected.size(); ++v) tv += std::abs(counts[v] / n - expected[v]);
    CHECK(tv / 2 < 0.02);
  }
}

TEST_CASE("accepted match judgments follow the target") {
  auto target = std::make_shared<MixtureTarget>(TargetSpec{{
      GaussianComponent{0.5, {300, 40, 70}, {25, 15, 10}},
      GaussianComponent{0.5, {60, 80, 40}, {20, 10, 15}},
  }});
  OracleRespondent oracle(target);
  const auto expected = target_histogram(*target);
  Rng rng(23);
  std::vector<double> counts(GridHistogram::kBinCount, 0.0);
  for (int accepted = 0; accepted < 50000;) {
    const HslColor c = lattice_point(static_cast<std::size_t>(uniform_int(rng, 0, kLatticePoints - 1)));
    if (std::get<YesNo>(oracle.answer(MatchJudgment{"x", c}, rng).answer).yes) {
      counts[GridHistogram::linear(bin_index(c))] += 1.0;
      ++accepted;
    }
  }
  CHECK(grid_chi_square_p(counts, expected.masses()) > 0.001);
}

TEST_CASE("report draws follow the lattice distribution") {
  auto target = std::make_shared<MixtureTarget>(single_gaussian(180, 50, 50, 15, 10, 10));
  OracleRespondent oracle(target);
  Rng rng(8);
  double sum_s = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum_s += std::get<ColorCode>(oracle.answer(ReportColor{"x"}, rng).answer).color.s;
  CHECK(std::abs(sum_s / n - 50.0) < 3.0 * 10.0 / std::sqrt(n));
}

TEST_CASE("degenerate target") {
  auto zero = std::make_shared<TabulatedTarget>(TabulatedTarget::from_function([](const HslColor&) { return 0.0; }));
  CHECK_THROWS_AS(OracleRespondent{zero}, DegenerateTarget);
}

TEST_CASE("target spec validation") {
  CHECK_THROWS_AS(single_gaussian(0, 0, 0, 0, 1, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS((TargetSpec{{GaussianComponent{0.5}}}.validate()), std::invalid_argument);
  CHECK_NOTHROW(single_gaussian(0, 0, 0, 1, 1, 1).validate());
  CHECK(circular_hue_distance(350, 10) == 20);
}

TEST_CASE("wrapped hue density is symmetric across zero") {
  MixtureTarget t(single_gaussian(0, 50, 50, 15, 10, 10));
  CHECK(t.log_density({10, 50, 50}) == doctest::Approx(t.log_density({350, 50, 50})));
}

}
