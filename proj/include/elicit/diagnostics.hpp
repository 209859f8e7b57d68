#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elicit/color.hpp"
#include "elicit/samplers.hpp"

namespace elicit {

// ---------------------------------------------------------------------------
// Convergence

struct GelmanRubin {
  double rhat = 1.0;
  /// Within-chain variance was zero; rhat is 1 (identical constants) or +inf.
  bool degenerate = false;
};

/// Potential scale reduction factor of Gelman & Rubin (1992):
/// W is the mean within-chain variance, B/n the variance of the chain means,
/// V = (n-1)/n W + B/n, R = sqrt(V / W).
/// Needs >= 2 chains of equal length >= 2 (InsufficientChains otherwise).
GelmanRubin gelman_rubin(std::span<const std::vector<double>> chains);

/// Same statistic from per-chain means and unbiased variances.
GelmanRubin gelman_rubin_from_moments(std::span<const double> means, std::span<const double> variances,
                                      std::size_t n);

struct RhatPoint {
  std::size_t t = 0;  // samples per chain used
  std::array<double, 3> per_dimension{};
  double value = 1.0;  // max over dimensions
  bool degenerate = false;
};

using RhatTrace = std::vector<RhatPoint>;

/// Max over H, S, L of gelman_rubin on the first `t` samples of every chain.
RhatPoint rhat_vector(std::span<const std::vector<HslColor>> chains, std::size_t t);

/// Cumulative R-hat for t = 2 .. T where T is the shortest chain length after
/// dropping `burn_in` leading samples. Empty when T < 2.
RhatTrace rhat_trace(std::span<const std::vector<HslColor>> chains, std::size_t burn_in = 0);

// ---------------------------------------------------------------------------
// Alignment

/// sqrt(1/2 * sum (sqrt p - sqrt q)^2). Throws GridMismatch on differing sizes.
double hellinger(std::span<const double> p, std::span<const double> q);
double hellinger(const GridHistogram& p, const GridHistogram& q);

/// Center of the heaviest bin; ties go to the lowest (i, j, k).
HslColor mode_of(const GridHistogram& h);

enum class HueMetric { Linear, Circular };
std::string_view hue_metric_name(HueMetric m);

double mode_distance(const HslColor& a, const HslColor& b, HueMetric metric = HueMetric::Linear);

struct AlignmentCell {
  std::string object;
  Method method = Method::Mcmc;
  double hellinger = 0.0;
  double mode_distance = 0.0;
  int repetitions = 0;  // chains averaged
};

struct ProgressionPoint {
  int iterations = 0;
  int chains = 0;
  double hellinger_mean = 0.0;
  double hellinger_sem = 0.0;
  double mode_mean = 0.0;
  double mode_sem = 0.0;
};

struct AlignmentReport {
  std::vector<std::string> objects;  // first-seen order
  std::vector<Method> methods;       // kAllMethods order, present ones only
  std::vector<AlignmentCell> cells;
  std::map<std::pair<std::string, Method>, std::vector<ProgressionPoint>> progression;

  const AlignmentCell* find(const std::string& object, Method method) const;
};

struct AlignmentOptions {
  std::size_t burn_in = 0;  // leading iterations ignored
  HueMetric hue_metric = HueMetric::Linear;
  int progression_stride = 10;
};

/// Per object x method: hellinger and mode distance of each complete chain's
/// histogram against the object's reference, averaged over chains, plus the
/// progression of both metrics with iteration count (mean and SEM over chains).
/// Throws MissingReference when an object has no reference histogram.
AlignmentReport build_alignment_report(std::span<const ChainOutput> runs,
                                       const std::map<std::string, GridHistogram>& references,
                                       const AlignmentOptions& options = {});

}  // namespace elicit
