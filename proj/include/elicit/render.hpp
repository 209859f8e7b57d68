#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "elicit/color.hpp"
#include "elicit/diagnostics.hpp"

namespace elicit {

/// RGB raster written as PNG (no timestamps or other varying chunks).
class Image {
 public:
  Image(int width, int height, Rgb fill = {255, 255, 255});

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  /// Ignores coordinates outside the image.
  void set(int x, int y, Rgb c);
  void fill_rect(int x, int y, int w, int h, Rgb c);
  void line(double x0, double y0, double x1, double y1, Rgb c);
  void dashed_hline(int y, int x0, int x1, int dash, Rgb c);

  void write_png(const std::filesystem::path& path) const;

 private:
  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

/// PNG decoder used by tests and the CLI to inspect figures.
Image read_png(const std::filesystem::path& path);

struct StripOptions {
  int cell_width = 1;
  int cell_height = 1;
};

/// One row per chain, one column per sample, each cell the sample's color.
Image color_strip(const std::vector<std::vector<HslColor>>& chains, const StripOptions& options = {});
void render_color_strip(const std::vector<std::vector<HslColor>>& chains, const std::filesystem::path& path,
                        const StripOptions& options = {});

struct TracePlotOptions {
  int width = 640;
  int height = 400;
  double threshold = 1.1;
  /// Values above this (including +inf) are drawn at the ceiling with a marker.
  double ceiling = 3.0;
};

/// Cumulative R-hat against iteration with a dashed rule at the threshold.
/// Throws EmptyTrace when no trace has a point.
Image rhat_plot(const std::vector<RhatTrace>& traces, const TracePlotOptions& options = {});
void render_rhat_trace(const std::vector<RhatTrace>& traces, const std::filesystem::path& path,
                       const TracePlotOptions& options = {});

struct ScatterOptions {
  int width = 720;
  int height = 400;
  double bandwidth = 1.0;
  std::vector<double> contour_levels{0.1, 0.3, 0.5, 0.7, 0.9};  // fractions of the peak
};

/// Samples on a dimension pair, axes spanning the full ranges, with KDE
/// iso-density contours. Throws EmptySampleSet.
Image scatter_kde_plot(const std::vector<HslColor>& samples, Projection projection,
                       const ScatterOptions& options = {});
void render_scatter_kde(const std::vector<HslColor>& samples, Projection projection,
                        const std::filesystem::path& path, const ScatterOptions& options = {});

}  // namespace elicit
