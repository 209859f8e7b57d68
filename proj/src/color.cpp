#include "elicit/color.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "elicit/errors.hpp"

namespace elicit {

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Hue: return "hue";
    case Dimension::Saturation: return "saturation";
    case Dimension::Lightness: return "lightness";
  }
  return "?";
}

std::optional<Dimension> parse_dimension(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "h" || lower == "hue") return Dimension::Hue;
  if (lower == "s" || lower == "saturation") return Dimension::Saturation;
  if (lower == "l" || lower == "lightness") return Dimension::Lightness;
  return std::nullopt;
}

HslColor HslColor::with(Dimension d, int value) const {
  HslColor out = *this;
  switch (d) {
    case Dimension::Hue: out.h = value; break;
    case Dimension::Saturation: out.s = value; break;
    case Dimension::Lightness: out.l = value; break;
  }
  return out;
}

namespace {

int wrap_hue(double h) {
  double wrapped = std::fmod(h, 360.0);
  if (wrapped < 0) wrapped += 360.0;
  // rounding can land on 360 (e.g. 359.7)
  int rounded = static_cast<int>(std::round(wrapped));
  return rounded >= 360 ? rounded - 360 : rounded;
}

int clamp_percent(double v) { return static_cast<int>(std::round(std::clamp(v, 0.0, 100.0))); }

}  // namespace

int canonicalize_value(Dimension d, double value) {
  if (!std::isfinite(value)) {
    throw InvalidCoordinate("non-finite " + std::string(dimension_name(d)) + " coordinate");
  }
  return d == Dimension::Hue ? wrap_hue(value) : clamp_percent(value);
}

HslColor canonicalize(double h, double s, double l) {
  return {canonicalize_value(Dimension::Hue, h), canonicalize_value(Dimension::Saturation, s),
          canonicalize_value(Dimension::Lightness, l)};
}

std::size_t lattice_index(const HslColor& c) {
  return (static_cast<std::size_t>(c.h) * 101 + static_cast<std::size_t>(c.s)) * 101 +
         static_cast<std::size_t>(c.l);
}

HslColor lattice_point(std::size_t index) {
  const int l = static_cast<int>(index % 101);
  index /= 101;
  const int s = static_cast<int>(index % 101);
  return {static_cast<int>(index / 101), s, l};
}

BinIndex bin_index(const HslColor& c) {
  return {std::min(c.h / GridHistogram::kHueWidth, GridHistogram::kHueBins - 1),
          std::min(c.s / GridHistogram::kSatWidth, GridHistogram::kSatBins - 1),
          std::min(c.l / GridHistogram::kLightWidth, GridHistogram::kLightBins - 1)};
}

BinIndex GridHistogram::unlinear(std::size_t index) {
  BinIndex b;
  b.light = static_cast<int>(index % kLightBins);
  index /= kLightBins;
  b.sat = static_cast<int>(index % kSatBins);
  b.hue = static_cast<int>(index / kSatBins);
  return b;
}

GridHistogram GridHistogram::from_weights(std::span<const double> weights) {
  if (weights.size() != kBinCount) {
    throw GridMismatch("expected " + std::to_string(kBinCount) + " bins, got " +
                       std::to_string(weights.size()));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("bin weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0) throw EmptySampleSet("histogram weights sum to zero");
  GridHistogram out;
  for (std::size_t i = 0; i < kBinCount; ++i) out.mass_[i] = weights[i] / total;
  return out;
}

double GridHistogram::total() const { return std::accumulate(mass_.begin(), mass_.end(), 0.0); }

GridHistogram histogram(std::span<const HslColor> samples) {
  if (samples.empty()) throw EmptySampleSet("histogram of an empty sample set");
  std::array<std::size_t, GridHistogram::kBinCount> counts{};
  for (const auto& c : samples) ++counts[GridHistogram::linear(bin_index(c))];
  GridHistogram out;
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out.mass_[i] = static_cast<double>(counts[i]) / n;
  out.sample_count_ = samples.size();
  return out;
}

KdeGrid default_kde_grid(Projection projection, double bandwidth, double step, double pad_bandwidths) {
  const double pad = pad_bandwidths * bandwidth;
  auto upper = [](Dimension d) { return static_cast<double>(lattice_size(d) - 1); };
  return {-pad, upper(projection.x) + pad, -pad, upper(projection.y) + pad, step};
}

double KdeEstimate::riemann_sum() const {
  return std::accumulate(density.begin(), density.end(), 0.0) * step * step;
}

namespace {

std::vector<double> axis(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

}  // namespace

KdeEstimate kde(std::span<const HslColor> samples, double bandwidth, Projection projection,
                std::optional<KdeGrid> grid) {
  if (samples.empty()) throw EmptySampleSet("kde of an empty sample set");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("kde bandwidth must be positive");
  const KdeGrid g = grid.value_or(default_kde_grid(projection, bandwidth));
  if (!(g.step > 0.0)) throw std::invalid_argument("kde grid step must be positive");

  KdeEstimate est;
  est.projection = projection;
  est.bandwidth = bandwidth;
  est.step = g.step;
  est.xs = axis(g.x_min, g.x_max, g.step);
  est.ys = axis(g.y_min, g.y_max, g.step);
  est.density.assign(est.xs.size() * est.ys.size(), 0.0);

  // Kernel is truncated where it falls below exp(-32) of its peak.
  const double cutoff = 8.0 * bandwidth;
  const double norm = 1.0 / (2.0 * std::numbers::pi * bandwidth * bandwidth *
                             static_cast<double>(samples.size()));
  std::vector<double> wx(est.xs.size()), wy(est.ys.size());
  for (const auto& c : samples) {
    const double cx = c[projection.x];
    const double cy = c[projection.y];
    for (std::size_t i = 0; i < est.xs.size(); ++i) {
      const double z = (est.xs[i] - cx) / bandwidth;
      wx[i] = std::abs(est.xs[i] - cx) > cutoff ? 0.0 : std::exp(-0.5 * z * z);
    }
    for (std::size_t j = 0; j < est.ys.size(); ++j) {
      const double z = (est.ys[j] - cy) / bandwidth;
      wy[j] = std::abs(est.ys[j] - cy) > cutoff ? 0.0 : std::exp(-0.5 * z * z);
    }
    for (std::size_t j = 0; j < est.ys.size(); ++j) {
      if (wy[j] == 0.0) continue;
      double* row = est.density.data() + j * est.xs.size();
      for (std::size_t i = 0; i < est.xs.size(); ++i) row[i] += norm * wy[j] * wx[i];
    }
  }
  return est;
}

Rgb hsl_to_rgb(const HslColor& c) {
  const double s = c.s / 100.0;
  const double l = c.l / 100.0;
  const double chroma = (1.0 - std::abs(2.0 * l - 1.0)) * s;
  const double sector = c.h / 60.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(sector, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(sector) % 6) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  const double m = l - chroma / 2.0;
  auto to_byte = [m](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::round((v + m) * 255.0), 0.0, 255.0));
  };
  return {to_byte(r), to_byte(g), to_byte(b)};
}

}  // namespace elicit
