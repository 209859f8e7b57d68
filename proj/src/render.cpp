#include "elicit/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>

#include <png.h>

#include "elicit/errors.hpp"

namespace elicit {

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  pixels_[static_cast<std::size_t>(y) * width_ + x] = c;
}

void Image::fill_rect(int x, int y, int w, int h, Rgb c) {
  for (int j = y; j < y + h; ++j) {
    for (int i = x; i < x + w; ++i) set(i, j, c);
  }
}

void Image::line(double x0, double y0, double x1, double y1, Rgb c) {
  const double steps = std::max({std::abs(x1 - x0), std::abs(y1 - y0), 1.0});
  const int n = static_cast<int>(std::ceil(steps));
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    set(static_cast<int>(std::lround(x0 + t * (x1 - x0))), static_cast<int>(std::lround(y0 + t * (y1 - y0))), c);
  }
}

void Image::dashed_hline(int y, int x0, int x1, int dash, Rgb c) {
  for (int x = x0; x <= x1; ++x) {
    if (((x - x0) / dash) % 2 == 0) set(x, y, c);
  }
}

void Image::write_png(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error("cannot write image " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("failed encoding " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width_), static_cast<png_uint_32>(height_), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(static_cast<std::size_t>(width_) * 3);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const Rgb c = at(x, y);
      row[3 * x] = c.r;
      row[3 * x + 1] = c.g;
      row[3 * x + 2] = c.b;
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image read_png(const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) throw Error("cannot read image " + path.string());
  img.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&img);
    throw Error("cannot decode image " + path.string());
  }
  Image out(static_cast<int>(img.width), static_cast<int>(img.height));
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const std::size_t o = (static_cast<std::size_t>(y) * out.width() + x) * 3;
      out.set(x, y, {buffer[o], buffer[o + 1], buffer[o + 2]});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Image color_strip(const std::vector<std::vector<HslColor>>& chains, const StripOptions& options) {
  if (chains.empty()) throw EmptySampleSet("color strip needs at least one chain");
  std::size_t columns = 0;
  for (const auto& c : chains) columns = std::max(columns, c.size());
  if (columns == 0) throw EmptySampleSet("color strip chains are all empty");
  Image img(static_cast<int>(columns) * options.cell_width, static_cast<int>(chains.size()) * options.cell_height);
  for (std::size_t row = 0; row < chains.size(); ++row) {
    for (std::size_t col = 0; col < chains[row].size(); ++col) {
      img.fill_rect(static_cast<int>(col) * options.cell_width, static_cast<int>(row) * options.cell_height,
                    options.cell_width, options.cell_height, hsl_to_rgb(chains[row][col]));
    }
  }
  return img;
}

void render_color_strip(const std::vector<std::vector<HslColor>>& chains, const std::filesystem::path& path,
                        const StripOptions& options) {
  color_strip(chains, options).write_png(path);
}

namespace {

constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kGrey{170, 170, 170};
constexpr Rgb kRed{220, 30, 30};
constexpr std::array<Rgb, 6> kPalette = {Rgb{31, 119, 180}, Rgb{255, 127, 14}, Rgb{44, 160, 44},
                                         Rgb{148, 103, 189}, Rgb{140, 86, 75}, Rgb{23, 190, 207}};

struct Frame {
  int left = 40, right = 12, top = 12, bottom = 30;
  int width = 0, height = 0;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * (width - left - right - 1); }
  double py(double y) const { return height - bottom - 1 - (y - y_min) / (y_max - y_min) * (height - top - bottom - 1); }

  void draw_axes(Image& img) const {
    img.line(left, top, left, height - bottom - 1, kBlack);
    img.line(left, height - bottom - 1, width - right - 1, height - bottom - 1, kBlack);
  }
};

}  // namespace

Image rhat_plot(const std::vector<RhatTrace>& traces, const TracePlotOptions& options) {
  std::size_t longest = 0;
  for (const auto& t : traces) {
    if (!t.empty()) longest = std::max(longest, t.back().t);
  }
  if (longest == 0) throw EmptyTrace("R-hat plot needs at least one trace point (chains of length >= 2)");

  Frame f;
  f.width = options.width;
  f.height = options.height;
  f.x_min = 2;
  f.x_max = std::max<double>(3, static_cast<double>(longest));
  double lo = options.threshold, hi = options.threshold;
  for (const auto& t : traces) {
    for (const auto& p : t) {
      const double v = std::min(p.value, options.ceiling);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  f.y_min = std::floor(lo * 10.0) / 10.0 - 0.05;
  f.y_max = hi + 0.05;

  Image img(f.width, f.height);
  f.draw_axes(img);
  // gridlines every 0.1 in R-hat
  for (double y = std::ceil(f.y_min * 10.0) / 10.0; y < f.y_max; y += 0.1) {
    img.line(f.left - 4, f.py(y), f.left, f.py(y), kBlack);
  }
  img.dashed_hline(static_cast<int>(std::lround(f.py(options.threshold))), f.left + 1, f.width - f.right - 1, 6, kRed);

  for (std::size_t i = 0; i < traces.size(); ++i) {
    const Rgb color = kPalette[i % kPalette.size()];
    double prev_x = 0, prev_y = 0;
    bool have_prev = false;
    for (const auto& p : traces[i]) {
      const bool clipped = !(p.value <= options.ceiling);
      const double x = f.px(static_cast<double>(p.t));
      const double y = f.py(clipped ? options.ceiling : p.value);
      if (have_prev) img.line(prev_x, prev_y, x, y, color);
      if (clipped) {
        img.line(x - 2, y - 2, x + 2, y + 2, kRed);
        img.line(x - 2, y + 2, x + 2, y - 2, kRed);
      }
      prev_x = x;
      prev_y = y;
      have_prev = true;
    }
  }
  return img;
}

void render_rhat_trace(const std::vector<RhatTrace>& traces, const std::filesystem::path& path,
                       const TracePlotOptions& options) {
  rhat_plot(traces, options).write_png(path);
}

namespace {

/// Marching squares over the KDE grid at one iso level.
void draw_contour(Image& img, const Frame& f, const KdeEstimate& est, double level) {
  const std::size_t nx = est.xs.size(), ny = est.ys.size();
  auto lerp = [&](double a, double b, double va, double vb) { return a + (level - va) / (vb - va) * (b - a); };
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const double v00 = est.at(i, j), v10 = est.at(i + 1, j), v11 = est.at(i + 1, j + 1), v01 = est.at(i, j + 1);
      const int code = (v00 >= level) | (v10 >= level) << 1 | (v11 >= level) << 2 | (v01 >= level) << 3;
      if (code == 0 || code == 15) continue;
      const double x0 = est.xs[i], x1 = est.xs[i + 1], y0 = est.ys[j], y1 = est.ys[j + 1];
      // edge crossings: bottom, right, top, left
      const std::array<std::pair<double, double>, 4> edge = {
          std::pair{lerp(x0, x1, v00, v10), y0}, std::pair{x1, lerp(y0, y1, v10, v11)},
          std::pair{lerp(x0, x1, v01, v11), y1}, std::pair{x0, lerp(y0, y1, v00, v01)}};
      auto seg = [&](int a, int b) {
        img.line(f.px(edge[a].first), f.py(edge[a].second), f.px(edge[b].first), f.py(edge[b].second), kBlack);
      };
      switch (code) {
        case 1: case 14: seg(3, 0); break;
        case 2: case 13: seg(0, 1); break;
        case 3: case 12: seg(3, 1); break;
        case 4: case 11: seg(1, 2); break;
        case 6: case 9: seg(0, 2); break;
        case 7: case 8: seg(3, 2); break;
        case 5: seg(3, 2); seg(0, 1); break;
        case 10: seg(3, 0); seg(1, 2); break;
        default: break;
      }
    }
  }
}

}  // namespace

Image scatter_kde_plot(const std::vector<HslColor>& samples, Projection projection, const ScatterOptions& options) {
  if (samples.empty()) throw EmptySampleSet("scatter plot of an empty sample set");
  Frame f;
  f.width = options.width;
  f.height = options.height;
  auto span_of = [](Dimension d) { return d == Dimension::Hue ? 360.0 : 100.0; };
  f.x_max = span_of(projection.x);
  f.y_max = span_of(projection.y);

  Image img(f.width, f.height);
  f.draw_axes(img);
  for (double x = 0; x <= f.x_max; x += f.x_max / 6) img.line(f.px(x), f.py(0), f.px(x), f.py(0) + 4, kBlack);
  for (double y = 0; y <= f.y_max; y += f.y_max / 5) img.line(f.px(0) - 4, f.py(y), f.px(0), f.py(y), kBlack);

  for (const auto& c : samples) {
    const int x = static_cast<int>(std::lround(f.px(c[projection.x])));
    const int y = static_cast<int>(std::lround(f.py(c[projection.y])));
    img.fill_rect(x - 2, y - 2, 5, 5, kGrey);
    img.fill_rect(x - 1, y - 1, 3, 3, hsl_to_rgb(c));
  }

  const KdeGrid grid = default_kde_grid(projection, options.bandwidth, 1.0, 0.0);
  const KdeEstimate est = kde(samples, options.bandwidth, projection, grid);
  const double peak = *std::max_element(est.density.begin(), est.density.end());
  if (peak > 0) {
    for (double fraction : options.contour_levels) draw_contour(img, f, est, fraction * peak);
  }
  return img;
}

void render_scatter_kde(const std::vector<HslColor>& samples, Projection projection,
                        const std::filesystem::path& path, const ScatterOptions& options) {
  scatter_kde_plot(samples, projection, options).write_png(path);
}

}  // namespace elicit
