#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tablescout/error.hpp"
#include "tablescout/raster.hpp"

namespace tablescout {

struct PreprocessConfig {
  int bin_window = 25;   // odd, local window side
  double bin_k = 0.2;    // sensitivity, (0,1)
  double bin_R = 128.0;  // dynamic range of the standard deviation
  double border_margin_frac = 0.05;
  int dilate_w = 2;
  int dilate_h = 2;

  void validate() const {
    if (bin_window < 3 || bin_window % 2 == 0) {
      throw Error(Errc::InvalidArgument, "bin_window must be odd and >= 3, got " + std::to_string(bin_window));
    }
    if (!(bin_k > 0.0 && bin_k < 1.0)) {
      throw Error(Errc::InvalidArgument, "bin_k must lie in (0,1), got " + std::to_string(bin_k));
    }
    if (!(bin_R > 0.0)) throw Error(Errc::InvalidArgument, "bin_R must be positive");
    if (!(border_margin_frac > 0.0 && border_margin_frac < 0.5)) {
      throw Error(Errc::InvalidArgument, "border_margin_frac must lie in (0,0.5)");
    }
    if (dilate_w < 1 || dilate_h < 1) {
      throw Error(Errc::InvalidArgument, "structuring element dimensions must be >= 1");
    }
  }

  friend bool operator==(const PreprocessConfig&, const PreprocessConfig&) = default;
};

namespace detail {

/// Summed-area table with one extra leading row and column of zeros.
class IntegralImage {
 public:
  explicit IntegralImage(const GrayImage& img, bool squared)
      : w_(img.width() + 1), sums_(static_cast<std::size_t>(img.width() + 1) * (img.height() + 1), 0) {
    for (int y = 0; y < img.height(); ++y) {
      std::uint64_t run = 0;
      auto row = img.row(y);
      for (int x = 0; x < img.width(); ++x) {
        const std::uint64_t v = row[static_cast<std::size_t>(x)];
        run += squared ? v * v : v;
        at(x + 1, y + 1) = at(x + 1, y) + run;
      }
    }
  }

  /// Sum over [x0, x1) x [y0, y1).
  std::uint64_t sum(int x0, int y0, int x1, int y1) const {
    return at(x1, y1) + at(x0, y0) - at(x0, y1) - at(x1, y0);
  }

 private:
  std::uint64_t& at(int x, int y) { return sums_[static_cast<std::size_t>(y) * w_ + x]; }
  std::uint64_t at(int x, int y) const { return sums_[static_cast<std::size_t>(y) * w_ + x]; }

  int w_;
  std::vector<std::uint64_t> sums_;
};

}  // namespace detail

/// Local mean/deviation threshold. A pixel is ink iff
///   I <= m * (1 + k * (s / R - 1))
/// with m, s taken over the window clipped to the image.
inline BinaryImage binarize_adaptive(const GrayImage& gray, const PreprocessConfig& cfg) {
  cfg.validate();
  const int w = gray.width(), h = gray.height();
  const int half = cfg.bin_window / 2;
  const detail::IntegralImage sum(gray, false);
  const detail::IntegralImage sumsq(gray, true);

  BinaryImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - half), y1 = std::min(h, y + half + 1);
    auto src = gray.row(y);
    auto dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - half), x1 = std::min(w, x + half + 1);
      const auto n = static_cast<std::uint64_t>(x1 - x0) * static_cast<std::uint64_t>(y1 - y0);
      const std::uint64_t s1 = sum.sum(x0, y0, x1, y1);
      const std::uint64_t s2 = sumsq.sum(x0, y0, x1, y1);
      // n*s2 - s1^2 is the exact integer numerator of the variance
      const double var = static_cast<double>(n * s2 - s1 * s1) / static_cast<double>(n * n);
      const double mean = static_cast<double>(s1) / static_cast<double>(n);
      const double sd = std::sqrt(var);
      const double t = mean * (1.0 + cfg.bin_k * (sd / cfg.bin_R - 1.0));
      dst[static_cast<std::size_t>(x)] = static_cast<double>(src[static_cast<std::size_t>(x)]) <= t ? 1 : 0;
    }
  }
  return out;
}

/// Margin band widths (columns on left/right, rows on top/bottom).
struct MarginBand {
  int cols;
  int rows;

  bool contains(int x, int y, int w, int h) const noexcept {
    return x < cols || x >= w - cols || y < rows || y >= h - rows;
  }
};

inline MarginBand margin_band(int width, int height, double frac) {
  return {std::max(1, static_cast<int>(std::floor(frac * width))),
          std::max(1, static_cast<int>(std::floor(frac * height)))};
}

/// Clears 8-connected ink components that touch the image edge and lie
/// entirely inside the margin band.
inline BinaryImage remove_border_noise(const BinaryImage& bin, const PreprocessConfig& cfg) {
  cfg.validate();
  const int w = bin.width(), h = bin.height();
  const auto band = margin_band(w, h, cfg.border_margin_frac);
  BinaryImage out = bin;
  std::vector<std::uint8_t> seen(bin.size(), 0);
  std::vector<int> stack, component;
  auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      if (!bin.at(sx, sy) || seen[idx(sx, sy)]) continue;
      bool touches_edge = false, inside_band = true;
      component.clear();
      stack.assign(1, static_cast<int>(idx(sx, sy)));
      seen[idx(sx, sy)] = 1;
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        component.push_back(p);
        const int x = p % w, y = p / w;
        if (x == 0 || y == 0 || x == w - 1 || y == h - 1) touches_edge = true;
        if (!band.contains(x, y, w, h)) inside_band = false;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if ((dx || dy) && bin.contains(nx, ny) && bin.at(nx, ny) && !seen[idx(nx, ny)]) {
              seen[idx(nx, ny)] = 1;
              stack.push_back(static_cast<int>(idx(nx, ny)));
            }
          }
        }
      }
      if (touches_edge && inside_band) {
        for (int p : component) out.set(p % w, p / w, 0);
      }
    }
  }
  return out;
}

/// Dilation by a solid dilate_w x dilate_h element anchored at its top-left
/// cell: every ink pixel spreads right and down.
inline BinaryImage dilate(const BinaryImage& bin, const PreprocessConfig& cfg) {
  cfg.validate();
  const int w = bin.width(), h = bin.height();
  // horizontal pass then vertical pass; the rectangle is separable
  BinaryImage horiz(w, h);
  for (int y = 0; y < h; ++y) {
    auto src = bin.row(y);
    auto dst = horiz.row(y);
    for (int x = 0; x < w; ++x) {
      if (!src[static_cast<std::size_t>(x)]) continue;
      const int end = std::min(w, x + cfg.dilate_w);
      for (int xx = x; xx < end; ++xx) dst[static_cast<std::size_t>(xx)] = 1;
    }
  }
  BinaryImage out(w, h);
  for (int y = 0; y < h; ++y) {
    auto src = horiz.row(y);
    const int end = std::min(h, y + cfg.dilate_h);
    for (int yy = y; yy < end; ++yy) {
      auto dst = out.row(yy);
      for (int x = 0; x < w; ++x) dst[static_cast<std::size_t>(x)] |= src[static_cast<std::size_t>(x)];
    }
  }
  return out;
}

/// binarization -> border noise removal -> dilation
inline BinaryImage preprocess(const GrayImage& gray, const PreprocessConfig& cfg) {
  return dilate(remove_border_noise(binarize_adaptive(gray, cfg), cfg), cfg);
}

}  // namespace tablescout
