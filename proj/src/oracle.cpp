#include "elicit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "elicit/errors.hpp"

namespace elicit {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t draw_index(const std::vector<double>& cumulative, Rng& rng) {
  const double u = uniform01(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}
}  // namespace

OracleRespondent::OracleRespondent(std::shared_ptr<const Target> target, MatchRule rule,
                                   double threshold_fraction)
    : target_(std::move(target)), rule_(rule), threshold_(threshold_fraction), log_max_(kNegInf) {
  if (!target_) throw std::invalid_argument("oracle needs a target");
  for (std::size_t i = 0; i < kLatticePoints; ++i) {
    const double v = target_->log_density(lattice_point(i));
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw DegenerateTarget("target density is not finite on the lattice");
    }
    log_max_ = std::max(log_max_, v);
  }
  if (log_max_ == kNegInf) throw DegenerateTarget("target has zero mass on the lattice");
}

double OracleRespondent::choice_b_probability(const HslColor& a, const HslColor& b) const {
  const double la = target_->log_density(a);
  const double lb = target_->log_density(b);
  if (la == kNegInf && lb == kNegInf) return 0.5;
  if (la == kNegInf) return 1.0;
  if (lb == kNegInf) return 0.0;
  return 1.0 / (1.0 + std::exp(la - lb));
}

double OracleRespondent::match_probability(const HslColor& c) const {
  const double ratio = std::exp(target_->log_density(c) - log_max_);
  if (rule_ == MatchRule::Threshold) return ratio >= threshold_ ? 1.0 : 0.0;
  return std::min(ratio, 1.0);
}

std::vector<double> OracleRespondent::fill_distribution(const DimensionFill& q) const {
  const int n = lattice_size(q.missing);
  std::vector<double> weights(static_cast<std::size_t>(n));
  double peak = kNegInf;
  for (int v = 0; v < n; ++v) {
    weights[v] = target_->log_density(q.known.with(q.missing, v));
    peak = std::max(peak, weights[v]);
  }
  // An all-zero slice gives no information; fall back to uniform.
  if (peak == kNegInf) return std::vector<double>(weights.size(), 1.0 / n);
  double total = 0.0;
  for (double& w : weights) {
    w = std::exp(w - peak);
    total += w;
  }
  for (double& w : weights) w /= total;
  return weights;
}

HslColor OracleRespondent::sample_report(Rng& rng) const {
  std::call_once(cdf_once_, [this] {
    cdf_.resize(kLatticePoints);
    double running = 0.0;
    for (std::size_t i = 0; i < kLatticePoints; ++i) {
      running += std::exp(target_->log_density(lattice_point(i)) - log_max_);
      cdf_[i] = running;
    }
  });
  return lattice_point(draw_index(cdf_, rng));
}

Response OracleRespondent::answer(const Query& query, Rng& rng) {
  struct Visitor {
    const OracleRespondent& self;
    Rng& rng;
    Answer operator()(const ReportColor&) const { return ColorCode{self.sample_report(rng)}; }
    Answer operator()(const MatchJudgment& q) const {
      return YesNo{bernoulli(rng, self.match_probability(q.color))};
    }
    Answer operator()(const PairwiseChoice& q) const {
      const bool pick_b = bernoulli(rng, self.choice_b_probability(q.option_a, q.option_b));
      return ChoiceAnswer{pick_b ? Choice::B : Choice::A};
    }
    Answer operator()(const DimensionFill& q) const {
      auto weights = self.fill_distribution(q);
      for (std::size_t i = 1; i < weights.size(); ++i) weights[i] += weights[i - 1];
      return DimensionValue{static_cast<int>(draw_index(weights, rng))};
    }
  };
  Answer a = std::visit(Visitor{*this, rng}, query);
  std::string raw = answer_text(a);
  return {std::move(a), std::move(raw), 1};
}

}  // namespace elicit
