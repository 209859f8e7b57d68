#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "elicit/diagnostics.hpp"
#include "elicit/errors.hpp"

using namespace elicit;

namespace {

/// Textbook Gelman-Rubin, written out independently of the library.
double reference_rhat(const std::vector<std::vector<double>>& chains) {
  const double m = static_cast<double>(chains.size());
  const double n = static_cast<double>(chains[0].size());
  std::vector<double> means;
  double w = 0;
  for (const auto& c : chains) {
    double mean = 0;
    for (double x : c) mean += x;
    mean /= n;
    means.push_back(mean);
    double ss = 0;
    for (double x : c) ss += (x - mean) * (x - mean);
    w += ss / (n - 1);
  }
  w /= m;
  double grand = 0;
  for (double x : means) grand += x;
  grand /= m;
  double b_over_n = 0;
  for (double x : means) b_over_n += (x - grand) * (x - grand);
  b_over_n /= (m - 1);
  return std::sqrt(((n - 1) / n * w + b_over_n) / w);
}

std::vector<double> random_histogram(std::mt19937_64& rng, std::size_t k) {
  std::vector<double> p(k);
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution zero(0.3);
  double z = 0;
  for (double& x : p) z += (x = zero(rng) ? 0.0 : e(rng));
  if (z == 0) {
    p[0] = 1;
    z = 1;
  }
  for (double& x : p) x /= z;
  return p;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("gelman_rubin examples") {
  const std::vector<std::vector<double>> same{{1, 2, 3}, {1, 2, 3}};
  const auto r = gelman_rubin(same);
  CHECK(r.rhat == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  CHECK(std::abs(r.rhat - 0.8165) <= 1e-4);
  CHECK_FALSE(r.degenerate);

  const std::vector<std::vector<double>> constant{{5, 5}, {5, 5}};
  const auto c = gelman_rubin(constant);
  CHECK(c.degenerate);
  CHECK(c.rhat == 1.0);

  const std::vector<std::vector<double>> split{{0, 0}, {10, 10}};
  const auto s = gelman_rubin(split);
  CHECK(s.degenerate);
  CHECK(std::isinf(s.rhat));

  CHECK_THROWS_AS(gelman_rubin(std::vector<std::vector<double>>{{1, 2, 3}}), InsufficientChains);
  CHECK_THROWS_AS(gelman_rubin(std::vector<std::vector<double>>{{1}, {2}}), InsufficientChains);
  CHECK_THROWS_AS(gelman_rubin(std::vector<std::vector<double>>{{1, 2}, {1, 2, 3}}), std::invalid_argument);
}

TEST_CASE("gelman_rubin agrees with the textbook formula") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + trial % 5, n = 2 + trial * 3;
    std::vector<std::vector<double>> chains(m, std::vector<double>(n));
    for (int j = 0; j < m; ++j) {
      for (auto& x : chains[j]) x = g(rng) + 0.3 * j;
    }
    CHECK(gelman_rubin(chains).rhat == doctest::Approx(reference_rhat(chains)).epsilon(1e-10));
  }
}

TEST_CASE("gelman_rubin shift and scale invariance") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> chains(4, std::vector<double>(40));
    for (int j = 0; j < 4; ++j) {
      for (auto& x : chains[j]) x = g(rng) + 0.5 * j;
    }
    const double base = gelman_rubin(chains).rhat;
    const double shift = 1000.0 * g(rng), scale = std::exp(2 * g(rng));
    auto moved = chains;
    for (auto& c : moved) {
      for (auto& x : c) x = scale * x + shift;
    }
    CHECK(gelman_rubin(moved).rhat == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("identical nonconstant chains give sqrt((n-1)/n)") {
  std::mt19937_64 rng(4);
  for (std::size_t n = 2; n < 60; n += 7) {
    std::vector<HslColor> chain;
    for (std::size_t i = 0; i < n; ++i) chain.push_back({static_cast<int>(i % 7 * 10), static_cast<int>(i % 5 * 3),
                                                        static_cast<int>(i % 3 * 11)});
    const std::vector<std::vector<HslColor>> chains(3, chain);
    const auto p = rhat_vector(chains, n);
    for (double v : p.per_dimension) CHECK(v == doctest::Approx(std::sqrt((n - 1.0) / n)));
    CHECK(p.value < 1.0);
  }
}

TEST_CASE("rhat_trace matches per-prefix recomputation") {
  std::mt19937_64 rng(5);
  std::vector<std::vector<HslColor>> chains(4);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 80; ++i) chains[j].push_back(lattice_point((rng() % 500000 + j * 300000) % kLatticePoints));
  }
  const auto trace = rhat_trace(chains, 5);
  REQUIRE(trace.size() == 74);
  for (const auto& point : trace) {
    std::vector<std::vector<HslColor>> cut;
    for (const auto& c : chains) cut.emplace_back(c.begin() + 5, c.begin() + 5 + point.t);
    const auto direct = rhat_vector(cut, point.t);
    for (int d = 0; d < 3; ++d) {
      const double a = point.per_dimension[d], b = direct.per_dimension[d];
      if (std::isinf(b)) {
        CHECK(std::isinf(a));
      } else {
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
      }
    }
  }
  CHECK(rhat_trace(chains, 79).empty());
}

TEST_CASE("shared point mass chains report 1") {
  const std::vector<std::vector<HslColor>> chains(4, std::vector<HslColor>(20, HslColor{10, 20, 30}));
  const auto p = rhat_vector(chains, 20);
  CHECK(p.value == 1.0);
  CHECK(p.degenerate);
}

TEST_CASE("hellinger examples") {
  std::vector<double> p(1800, 0.0), q(1800, 0.0);
  p[0] = 0.5;
  p[1] = 0.5;
  q[0] = 1.0;
  CHECK(hellinger(p, p) == 0.0);
  const double expected = std::sqrt(0.5 * ((std::sqrt(0.5) - 1) * (std::sqrt(0.5) - 1) + 0.5));
  CHECK(hellinger(p, q) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(hellinger(p, q) - 0.5412) <= 1e-4);
  std::vector<double> r(1800, 0.0);
  r[7] = 1.0;
  CHECK(hellinger(p, r) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hellinger(p, std::vector<double>(3, 0.0)), GridMismatch);
}

TEST_CASE("hellinger is a bounded symmetric distance") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t k = 1 + rng() % 40;
    const auto p = random_histogram(rng, k), q = random_histogram(rng, k);
    const double d = hellinger(p, q);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(d == hellinger(q, p));
    CHECK(hellinger(p, p) == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("mode_of") {
  std::vector<double> w(1800, 0.0);
  w[GridHistogram::linear({0, 0, 0})] = 1;
  CHECK(mode_of(GridHistogram::from_weights(w)) == HslColor{10, 5, 5});
  std::fill(w.begin(), w.end(), 0.0);
  w[GridHistogram::linear({17, 9, 9})] = 1;
  CHECK(mode_of(GridHistogram::from_weights(w)) == HslColor{350, 95, 95});
  std::fill(w.begin(), w.end(), 0.0);
  w[GridHistogram::linear({0, 0, 0})] = 1;
  w[GridHistogram::linear({1, 0, 0})] = 1;
  CHECK(mode_of(GridHistogram::from_weights(w)) == HslColor{10, 5, 5});
}

TEST_CASE("mode_of ignores uniform rescaling") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto w = random_histogram(rng, 1800);
    const auto base = mode_of(GridHistogram::from_weights(w));
    const double c = std::exp(static_cast<double>(rng() % 20) - 10.0);
    for (double& x : w) x *= c;
    CHECK(mode_of(GridHistogram::from_weights(w)) == base);
  }
}

TEST_CASE("mode_distance") {
  CHECK(mode_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(mode_distance({0, 0, 0}, {3, 4, 0}) == 5.0);
  CHECK(mode_distance({350, 0, 0}, {10, 0, 0}, HueMetric::Linear) == 340.0);
  CHECK(mode_distance({350, 0, 0}, {10, 0, 0}, HueMetric::Circular) == 20.0);
}

TEST_CASE("circular mode distance is a metric") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5000; ++i) {
    const HslColor a = lattice_point(rng() % kLatticePoints), b = lattice_point(rng() % kLatticePoints),
                   c = lattice_point(rng() % kLatticePoints);
    const auto d = [](const HslColor& x, const HslColor& y) { return mode_distance(x, y, HueMetric::Circular); };
    CHECK(d(a, b) == d(b, a));
    CHECK((d(a, b) == 0.0) == (a == b));
    CHECK(d(a, c) <= d(a, b) + d(b, c) + 1e-9);
  }
}

TEST_CASE("alignment report against the sampled distribution itself") {
  std::mt19937_64 rng(9);
  std::vector<ChainOutput> runs;
  std::vector<HslColor> all;
  for (int c = 0; c < 4; ++c) {
    ChainOutput out;
    out.object = "Lemon";
    out.method = Method::DirectPrompting;
    out.chain_id = c;
    for (int i = 0; i < 50; ++i) {
      out.samples.push_back({55, 90, 60});
      out.sample_iterations.push_back(i);
      ChainRecord rec;
      rec.iteration = i;
      out.records.push_back(rec);
    }
    runs.push_back(out);
  }
  std::map<std::string, GridHistogram> refs{{"Lemon", histogram(runs[0].samples)}};
  const auto report = build_alignment_report(runs, refs);
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].hellinger == 0.0);
  CHECK(report.cells[0].mode_distance == 0.0);
  CHECK(report.cells[0].repetitions == 4);
  const auto& curve = report.progression.at({"Lemon", Method::DirectPrompting});
  REQUIRE(curve.size() == 5);
  CHECK(curve.back().iterations == 50);
  CHECK(curve.front().hellinger_sem == 0.0);

  CHECK_THROWS_AS(build_alignment_report(runs, {}), MissingReference);
}

TEST_CASE("alignment progression approaches the final value") {
  std::vector<ChainOutput> runs;
  for (int c = 0; c < 2; ++c) {
    ChainOutput out;
    out.object = "Grass";
    out.method = Method::Mcmc;
    out.chain_id = c;
    for (int i = 0; i < 30; ++i) {
      out.samples.push_back(i < 10 ? HslColor{200, 50, 50} : HslColor{100, 50, 50});
      out.sample_iterations.push_back(i);
      ChainRecord rec;
      rec.iteration = i;
      out.records.push_back(rec);
    }
    runs.push_back(out);
  }
  std::vector<HslColor> ref{{100, 50, 50}};
  AlignmentOptions opt;
  opt.progression_stride = 10;
  const auto report = build_alignment_report(runs, {{"Grass", histogram(ref)}}, opt);
  const auto& curve = report.progression.at({"Grass", Method::Mcmc});
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].hellinger_mean == doctest::Approx(1.0));
  CHECK(curve[2].hellinger_mean == doctest::Approx(report.cells[0].hellinger));
  CHECK(curve[2].hellinger_mean < curve[1].hellinger_mean);

  AlignmentOptions burn;
  burn.burn_in = 10;
  CHECK(build_alignment_report(runs, {{"Grass", histogram(ref)}}, burn).cells[0].hellinger == 0.0);
}

}
