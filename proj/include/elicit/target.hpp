#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "elicit/color.hpp"

namespace elicit {

/// Unnormalized density over the integer HSL lattice, in log space.
/// -infinity marks zero density.
class Target {
 public:
  virtual ~Target() = default;
  virtual double log_density(const HslColor& c) const = 0;
};

struct GaussianComponent {
  double weight = 1.0;
  std::array<double, 3> mean{180.0, 50.0, 50.0};
  std::array<double, 3> stddev{10.0, 10.0, 10.0};
};

/// Mixture of axis-aligned Gaussians; hue offsets are measured around the circle.
struct TargetSpec {
  std::vector<GaussianComponent> components;

  /// Throws std::invalid_argument when weights/stddevs are not positive or
  /// weights do not sum to 1 (within 1e-6).
  void validate() const;
};

class MixtureTarget final : public Target {
 public:
  explicit MixtureTarget(TargetSpec spec);
  double log_density(const HslColor& c) const override;
  const TargetSpec& spec() const { return spec_; }

 private:
  TargetSpec spec_;
  std::vector<double> log_norm_;  // log weight minus Gaussian normalizers
};

/// Density given explicitly at every lattice point.
class TabulatedTarget final : public Target {
 public:
  /// `densities` must hold kLatticePoints nonnegative values in lattice_index order.
  explicit TabulatedTarget(std::vector<double> densities);
  static TabulatedTarget from_function(const std::function<double(const HslColor&)>& density);
  double log_density(const HslColor& c) const override;

 private:
  std::vector<double> log_density_;
};

/// min(|a - b|, 360 - |a - b|) on real-valued hues.
double circular_hue_distance(double a, double b);

/// Normalized lattice probabilities, indexed by lattice_index. Throws DegenerateTarget.
std::vector<double> lattice_probabilities(const Target& target);

/// Target mass aggregated onto the 18 x 10 x 10 grid.
GridHistogram target_histogram(const Target& target);

}  // namespace elicit
