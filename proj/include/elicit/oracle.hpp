#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "elicit/respondent.hpp"
#include "elicit/target.hpp"

namespace elicit {

/// Synthetic respondent whose answers follow a known target exactly:
/// Barker choices, rejection-rule match judgments, exact conditional fills
/// and exact lattice draws for free reports.
class OracleRespondent final : public Respondent {
 public:
  /// Enumerates the lattice once to find the maximum density.
  /// Throws DegenerateTarget when the target has no finite positive mass.
  explicit OracleRespondent(std::shared_ptr<const Target> target, MatchRule rule = MatchRule::Graded,
                            double threshold_fraction = 0.5);

  Response answer(const Query& query, Rng& rng) override;
  std::string_view kind() const override { return "oracle"; }

  /// P(choose option B) = p(b) / (p(a) + p(b)); 1/2 when both are zero.
  double choice_b_probability(const HslColor& a, const HslColor& b) const;
  /// P(yes) under the configured match rule.
  double match_probability(const HslColor& c) const;
  /// Conditional distribution over the missing dimension's integer values.
  std::vector<double> fill_distribution(const DimensionFill& q) const;
  HslColor sample_report(Rng& rng) const;

  double log_max_density() const { return log_max_; }
  const Target& target() const { return *target_; }

 private:
  std::shared_ptr<const Target> target_;
  MatchRule rule_;
  double threshold_;
  double log_max_;
  mutable std::once_flag cdf_once_;
  mutable std::vector<double> cdf_;
};

}  // namespace elicit
