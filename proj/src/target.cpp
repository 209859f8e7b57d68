#include "elicit/target.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "elicit/errors.hpp"

namespace elicit {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double circular_hue_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

void TargetSpec::validate() const {
  if (components.empty()) throw std::invalid_argument("target needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      throw std::invalid_argument("component weights must be positive");
    }
    for (double sd : c.stddev) {
      if (!(sd > 0.0) || !std::isfinite(sd)) throw std::invalid_argument("component stddevs must be positive");
    }
    for (double m : c.mean) {
      if (!std::isfinite(m)) throw std::invalid_argument("component means must be finite");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("component weights must sum to 1");
}

MixtureTarget::MixtureTarget(TargetSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const double log_sqrt_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  for (const auto& c : spec_.components) {
    double v = std::log(c.weight);
    for (double sd : c.stddev) v -= std::log(sd) + log_sqrt_2pi;
    log_norm_.push_back(v);
  }
}

double MixtureTarget::log_density(const HslColor& c) const {
  // streaming log-sum-exp keeps far-tail ratios exact
  double peak = kNegInf;
  double scaled_sum = 0.0;
  for (std::size_t i = 0; i < spec_.components.size(); ++i) {
    const auto& comp = spec_.components[i];
    const double zh = circular_hue_distance(c.h, comp.mean[0]) / comp.stddev[0];
    const double zs = (c.s - comp.mean[1]) / comp.stddev[1];
    const double zl = (c.l - comp.mean[2]) / comp.stddev[2];
    const double term = log_norm_[i] - 0.5 * (zh * zh + zs * zs + zl * zl);
    if (term > peak) {
      scaled_sum = scaled_sum * std::exp(peak - term) + 1.0;
      peak = term;
    } else {
      scaled_sum += std::exp(term - peak);
    }
  }
  return peak + std::log(scaled_sum);
}

TabulatedTarget::TabulatedTarget(std::vector<double> densities) {
  if (densities.size() != kLatticePoints) {
    throw std::invalid_argument("tabulated target needs one density per lattice point");
  }
  log_density_.resize(densities.size());
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const double d = densities[i];
    if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("densities must be finite and >= 0");
    log_density_[i] = d > 0.0 ? std::log(d) : kNegInf;
  }
}

TabulatedTarget TabulatedTarget::from_function(const std::function<double(const HslColor&)>& density) {
  std::vector<double> values(kLatticePoints);
  for (std::size_t i = 0; i < kLatticePoints; ++i) values[i] = density(lattice_point(i));
  return TabulatedTarget(std::move(values));
}

double TabulatedTarget::log_density(const HslColor& c) const { return log_density_[lattice_index(c)]; }

std::vector<double> lattice_probabilities(const Target& target) {
  std::vector<double> out(kLatticePoints);
  double peak = kNegInf;
  for (std::size_t i = 0; i < kLatticePoints; ++i) {
    out[i] = target.log_density(lattice_point(i));
    if (std::isnan(out[i]) || out[i] == std::numeric_limits<double>::infinity()) {
      throw DegenerateTarget("target density is not finite on the lattice");
    }
    peak = std::max(peak, out[i]);
  }
  if (peak == kNegInf) throw DegenerateTarget("target has zero mass on the lattice");
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - peak);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

GridHistogram target_histogram(const Target& target) {
  const auto probs = lattice_probabilities(target);
  std::vector<double> bins(GridHistogram::kBinCount, 0.0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    bins[GridHistogram::linear(bin_index(lattice_point(i)))] += probs[i];
  }
  return GridHistogram::from_weights(bins);
}

}  // namespace elicit
