#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace elicit {

enum class Dimension : int { Hue = 0, Saturation = 1, Lightness = 2 };

inline constexpr std::array<Dimension, 3> kAllDimensions = {Dimension::Hue, Dimension::Saturation,
                                                           Dimension::Lightness};

/// Number of integer values a dimension takes on the lattice (360, 101, 101).
constexpr int lattice_size(Dimension d) { return d == Dimension::Hue ? 360 : 101; }

inline constexpr std::size_t kLatticePoints = 360u * 101u * 101u;

std::string_view dimension_name(Dimension d);
/// Accepts "h"/"hue", "s"/"saturation", "l"/"lightness" (case-insensitive).
std::optional<Dimension> parse_dimension(std::string_view text);

/// Integer point of the HSL cube: h in [0, 360), s and l in [0, 100].
struct HslColor {
  int h = 0;
  int s = 0;
  int l = 0;

  int operator[](Dimension d) const {
    switch (d) {
      case Dimension::Hue: return h;
      case Dimension::Saturation: return s;
      case Dimension::Lightness: return l;
    }
    return 0;
  }
  HslColor with(Dimension d, int value) const;

  /// True when every coordinate is inside the cube.
  bool is_canonical() const { return h >= 0 && h < 360 && s >= 0 && s <= 100 && l >= 0 && l <= 100; }

  friend auto operator<=>(const HslColor&, const HslColor&) = default;
};

/// Wraps hue modulo 360, clamps saturation and lightness to [0, 100] and rounds
/// half away from zero. Throws InvalidCoordinate on non-finite input.
HslColor canonicalize(double h, double s, double l);

/// Maps an integer value into a dimension's range (wrap for hue, clamp otherwise).
int canonicalize_value(Dimension d, double value);

/// Row-major position of a lattice point, h slowest.
std::size_t lattice_index(const HslColor& c);
HslColor lattice_point(std::size_t index);

// ---------------------------------------------------------------------------
// 18 x 10 x 10 grid

struct BinIndex {
  int hue = 0;
  int sat = 0;
  int light = 0;
  friend auto operator<=>(const BinIndex&, const BinIndex&) = default;
};

BinIndex bin_index(const HslColor& c);

class GridHistogram {
 public:
  static constexpr int kHueBins = 18;
  static constexpr int kSatBins = 10;
  static constexpr int kLightBins = 10;
  static constexpr std::size_t kBinCount = kHueBins * kSatBins * kLightBins;
  static constexpr int kHueWidth = 20;
  static constexpr int kSatWidth = 10;
  static constexpr int kLightWidth = 10;

  GridHistogram() { mass_.fill(0.0); }

  /// Normalizes arbitrary nonnegative weights laid out in (i, j, k) order.
  static GridHistogram from_weights(std::span<const double> weights);

  static std::size_t linear(const BinIndex& b) {
    return (static_cast<std::size_t>(b.hue) * kSatBins + b.sat) * kLightBins + b.light;
  }
  static BinIndex unlinear(std::size_t index);

  double operator[](std::size_t index) const { return mass_[index]; }
  double at(const BinIndex& b) const { return mass_[linear(b)]; }
  std::span<const double> masses() const { return mass_; }
  std::size_t sample_count() const { return sample_count_; }
  double total() const;

 private:
  friend GridHistogram histogram(std::span<const HslColor> samples);
  std::array<double, kBinCount> mass_;
  std::size_t sample_count_ = 0;
};

/// Fraction of samples per grid bin. Throws EmptySampleSet on empty input.
GridHistogram histogram(std::span<const HslColor> samples);

// ---------------------------------------------------------------------------
// Kernel density on a 2-D projection

struct Projection {
  Dimension x = Dimension::Hue;
  Dimension y = Dimension::Saturation;
};

struct KdeGrid {
  double x_min = 0, x_max = 0;
  double y_min = 0, y_max = 0;
  double step = 1.0;
};

/// Default evaluation grid: the projected dimension ranges padded by
/// `pad_bandwidths` bandwidths on each side.
KdeGrid default_kde_grid(Projection projection, double bandwidth, double step = 1.0,
                         double pad_bandwidths = 4.0);

struct KdeEstimate {
  Projection projection;
  double bandwidth = 1.0;
  double step = 1.0;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> density;  // ys.size() rows of xs.size()

  double at(std::size_t ix, std::size_t iy) const { return density[iy * xs.size() + ix]; }
  double riemann_sum() const;
};

/// Product-Gaussian kernel density of the projected samples. Hue is treated
/// linearly. Throws EmptySampleSet, or std::invalid_argument for bandwidth <= 0.
KdeEstimate kde(std::span<const HslColor> samples, double bandwidth, Projection projection,
                std::optional<KdeGrid> grid = std::nullopt);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// CSS hue-sector conversion.
Rgb hsl_to_rgb(const HslColor& c);

}  // namespace elicit
