#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "elicit/color.hpp"
#include "elicit/errors.hpp"

using namespace elicit;

TEST_SUITE("color") {

TEST_CASE("canonicalize wraps, clamps and rounds half away from zero") {
  CHECK(canonicalize(370.0, 50, 50) == HslColor{10, 50, 50});
  CHECK(canonicalize(-20, 150, -5) == HslColor{340, 100, 0});
  CHECK(canonicalize(120.5, 33.3, 66.6) == HslColor{121, 33, 67});
  CHECK(canonicalize(359.6, 0, 0) == HslColor{0, 0, 0});
  CHECK(canonicalize(-0.5, 0.5, 99.5) == HslColor{0, 1, 100});  // wraps to 359.5, rounds to 360 = 0
  CHECK(canonicalize(-720, 0, 0) == HslColor{0, 0, 0});
  CHECK_THROWS_AS(canonicalize(std::nan(""), 0, 0), InvalidCoordinate);
  CHECK_THROWS_AS(canonicalize(0, std::numeric_limits<double>::infinity(), 0), InvalidCoordinate);
}

TEST_CASE("canonicalize is idempotent") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2000.0, 2000.0);
  for (int i = 0; i < 20000; ++i) {
    const HslColor c = canonicalize(u(rng), u(rng), u(rng));
    CHECK(c.is_canonical());
    CHECK(canonicalize(c.h, c.s, c.l) == c);
  }
}

TEST_CASE("lattice index round trip") {
  CHECK(lattice_index({0, 0, 0}) == 0);
  CHECK(lattice_index({359, 100, 100}) == kLatticePoints - 1);
  for (std::size_t i = 0; i < kLatticePoints; i += 9973) CHECK(lattice_index(lattice_point(i)) == i);
}

TEST_CASE("bin_index examples and range") {
  CHECK(bin_index({0, 0, 0}) == BinIndex{0, 0, 0});
  CHECK(bin_index({359, 100, 100}) == BinIndex{17, 9, 9});
  CHECK(bin_index({45, 47, 81}) == BinIndex{45 / 20, 47 / 10, 81 / 10});
  for (std::size_t i = 0; i < kLatticePoints; i += 101) {
    const BinIndex b = bin_index(lattice_point(i));
    CHECK((b.hue >= 0 && b.hue <= 17 && b.sat >= 0 && b.sat <= 9 && b.light >= 0 && b.light <= 9));
  }
}

TEST_CASE("histogram") {
  const std::vector<HslColor> one{{0, 0, 0}};
  CHECK(histogram(one).at({0, 0, 0}) == 1.0);
  const std::vector<HslColor> dup{{0, 0, 0}, {0, 0, 0}};
  CHECK(histogram(dup).at({0, 0, 0}) == 1.0);
  const std::vector<HslColor> two{{0, 0, 0}, {359, 100, 100}};
  const auto h = histogram(two);
  CHECK(h.at({0, 0, 0}) == 0.5);
  CHECK(h.at({17, 9, 9}) == 0.5);
  CHECK(h.sample_count() == 2);
  CHECK_THROWS_AS(histogram(std::vector<HslColor>{}), EmptySampleSet);

  std::mt19937_64 rng(11);
  std::vector<HslColor> many;
  for (int i = 0; i < 12345; ++i) many.push_back(lattice_point(rng() % kLatticePoints));
  CHECK(std::abs(histogram(many).total() - 1.0) < 1e-9);
}

TEST_CASE("from_weights normalizes and checks size") {
  std::vector<double> w(GridHistogram::kBinCount, 0.0);
  w[0] = 2.0;
  w[5] = 6.0;
  const auto h = GridHistogram::from_weights(w);
  CHECK(h[0] == doctest::Approx(0.25));
  CHECK(h[5] == doctest::Approx(0.75));
  CHECK_THROWS_AS(GridHistogram::from_weights(std::vector<double>(10, 1.0)), GridMismatch);
  CHECK_THROWS_AS(GridHistogram::from_weights(std::vector<double>(GridHistogram::kBinCount, 0.0)),
                  EmptySampleSet);
}

TEST_CASE("kde single sample peaks at the sample") {
  const std::vector<HslColor> s{{50, 50, 20}};
  const auto k = kde(s, 1.0, {Dimension::Hue, Dimension::Saturation});
  std::size_t best = 0;
  for (std::size_t i = 1; i < k.density.size(); ++i) {
    if (k.density[i] > k.density[best]) best = i;
  }
  CHECK(k.xs[best % k.xs.size()] == doctest::Approx(50.0));
  CHECK(k.ys[best / k.xs.size()] == doctest::Approx(50.0));
}

TEST_CASE("kde symmetric about the midpoint") {
  const std::vector<HslColor> s{{40, 50, 0}, {60, 50, 0}};
  const KdeGrid grid{30, 70, 40, 60, 1.0};
  const auto k = kde(s, 1.0, {Dimension::Hue, Dimension::Saturation}, grid);
  for (std::size_t iy = 0; iy < k.ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < k.xs.size(); ++ix) {
      CHECK(k.at(ix, iy) == doctest::Approx(k.at(k.xs.size() - 1 - ix, iy)).epsilon(1e-12));
    }
  }
}

TEST_CASE("kde nonnegative and integrates to one on a padded grid") {
  std::mt19937_64 rng(3);
  std::vector<HslColor> s;
  for (int i = 0; i < 200; ++i) s.push_back(lattice_point(rng() % kLatticePoints));
  for (double bw : {1.0, 3.0, 10.0}) {
    const auto k = kde(s, bw, {Dimension::Saturation, Dimension::Lightness});
    for (double d : k.density) CHECK(d >= 0.0);
    CHECK(std::abs(k.riemann_sum() - 1.0) < 0.02);
  }
  CHECK_THROWS_AS(kde(s, 0.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(kde(std::vector<HslColor>{}, 1.0, {}), EmptySampleSet);
}

TEST_CASE("hsl_to_rgb") {
  CHECK(hsl_to_rgb({0, 100, 50}) == Rgb{255, 0, 0});
  CHECK(hsl_to_rgb({120, 100, 50}) == Rgb{0, 255, 0});
  CHECK(hsl_to_rgb({240, 100, 50}) == Rgb{0, 0, 255});
  CHECK(hsl_to_rgb({0, 0, 100}) == Rgb{255, 255, 255});
  CHECK(hsl_to_rgb({0, 0, 0}) == Rgb{0, 0, 0});
  for (int h = 0; h < 360; ++h) {
    for (int l = 0; l <= 100; l += 7) {
      const Rgb c = hsl_to_rgb({h, 0, l});
      CHECK((c.r == c.g && c.g == c.b));
    }
  }
}

TEST_CASE("dimension names") {
  CHECK(parse_dimension("H") == Dimension::Hue);
  CHECK(parse_dimension("lightness") == Dimension::Lightness);
  CHECK_FALSE(parse_dimension("x").has_value());
}

}
