#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tablescout/category.hpp"
#include "tablescout/error.hpp"

namespace tablescout {

/// Pixel kind tags. Gray pixels are intensities (0 = black ink); binary
/// pixels are foreground flags (1 = ink).
struct GrayKind {
  static constexpr std::uint8_t max_value = 255;
  static constexpr const char* name = "GrayImage";
};
struct BinaryKind {
  static constexpr std::uint8_t max_value = 1;
  static constexpr const char* name = "BinaryImage";
};

/// Row-major 8-bit raster. Immutable once handed out by value; the mutating
/// accessors exist for the producers (readers, filters, generators).
template <typename Kind>
class Image {
 public:
  using kind_type = Kind;

  Image() = default;

  Image(int width, int height, std::uint8_t fill = 0) : width_(width), height_(height) {
    check_dims(width, height);
    check_value(fill);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Image(int width, int height, std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(Errc::CorruptImage, std::string(Kind::name) + ": pixel count " +
                                          std::to_string(data_.size()) + " != " +
                                          std::to_string(width) + "x" + std::to_string(height));
    }
    for (auto v : data_) check_value(v);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }

  std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
  void set(int x, int y, std::uint8_t v) { data_[index(x, y)] = v; }

  std::span<const std::uint8_t> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<std::uint8_t> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::span<const std::uint8_t> pixels() const noexcept { return data_; }
  std::span<std::uint8_t> pixels() noexcept { return data_; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  static void check_dims(int w, int h) {
    if (w <= 0 || h <= 0) {
      throw Error(Errc::InvalidArgument, std::string(Kind::name) + ": dimensions must be positive, got " +
                                             std::to_string(w) + "x" + std::to_string(h));
    }
  }
  static void check_value(std::uint8_t v) {
    if (v > Kind::max_value) {
      throw Error(Errc::CorruptImage,
                  std::string(Kind::name) + ": pixel value " + std::to_string(v) + " out of range");
    }
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

using GrayImage = Image<GrayKind>;
using BinaryImage = Image<BinaryKind>;

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const noexcept { return x + w; }   // exclusive
  int bottom() const noexcept { return y + h; }  // exclusive
  long long area() const noexcept { return static_cast<long long>(w) * h; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

template <typename Kind>
bool fits(const Rect& r, const Image<Kind>& img) noexcept {
  return r.w > 0 && r.h > 0 && r.x >= 0 && r.y >= 0 && r.x + r.w <= img.width() &&
         r.y + r.h <= img.height();
}

inline std::string to_string(const Rect& r) {
  return "(" + std::to_string(r.x) + "," + std::to_string(r.y) + " " + std::to_string(r.w) + "x" +
         std::to_string(r.h) + ")";
}

template <typename Kind>
void require_fits(const Rect& r, const Image<Kind>& img) {
  if (!fits(r, img)) {
    throw Error(Errc::OutOfBounds, "rect " + to_string(r) + " outside " + std::to_string(img.width()) +
                                       "x" + std::to_string(img.height()) + " image");
  }
}

inline std::size_t count_foreground(const BinaryImage& img) {
  std::size_t n = 0;
  for (auto v : img.pixels()) n += v;
  return n;
}

template <typename Kind>
Image<Kind> crop(const Image<Kind>& img, const Rect& r) {
  require_fits(r, img);
  Image<Kind> out(r.w, r.h);
  for (int y = 0; y < r.h; ++y) {
    auto src = img.row(r.y + y).subspan(static_cast<std::size_t>(r.x), static_cast<std::size_t>(r.w));
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

/// Border gray level used for each category in overlays.
constexpr std::uint8_t overlay_level(Category c) {
  switch (c) {
    case Category::A: return 0;
    case Category::B: return 64;
    case Category::C: return 128;
  }
  return 0;
}

constexpr int kOverlayThickness = 2;

/// Burns a 2-pixel rectangle border (inside the rect) per region.
inline GrayImage render_overlay(const GrayImage& gray,
                                std::span<const std::pair<Rect, Category>> regions) {
  for (const auto& [r, c] : regions) require_fits(r, gray);
  GrayImage out = gray;
  for (const auto& [r, c] : regions) {
    const auto level = overlay_level(c);
    for (int y = r.y; y < r.bottom(); ++y) {
      const bool edge_row = y < r.y + kOverlayThickness || y >= r.bottom() - kOverlayThickness;
      for (int x = r.x; x < r.right(); ++x) {
        if (edge_row || x < r.x + kOverlayThickness || x >= r.right() - kOverlayThickness) {
          out.set(x, y, level);
        }
      }
    }
  }
  return out;
}

}  // namespace tablescout
