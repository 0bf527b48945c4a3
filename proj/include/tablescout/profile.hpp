#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "tablescout/error.hpp"
#include "tablescout/raster.hpp"

namespace tablescout {

struct ProfileConfig {
  int row_noise_floor = 1;  // rows with fewer ink pixels than this are blank
  int min_blank_rows = 2;   // blank run that separates two lines
  int min_gap_px = 2;       // narrowest blank-column run counted as a gap

  void validate() const {
    if (row_noise_floor < 0) throw Error(Errc::InvalidArgument, "row_noise_floor must be >= 0");
    if (min_blank_rows < 1) throw Error(Errc::InvalidArgument, "min_blank_rows must be >= 1");
    if (min_gap_px < 1) throw Error(Errc::InvalidArgument, "min_gap_px must be >= 1");
  }

  friend bool operator==(const ProfileConfig&, const ProfileConfig&) = default;
};

struct Gap {
  int x_start = 0;
  int width = 0;

  friend bool operator==(const Gap&, const Gap&) = default;
};

/// Inclusive row range of one segmented line.
struct Band {
  int y_top = 0;
  int y_bottom = 0;

  int height() const noexcept { return y_bottom - y_top + 1; }
  friend bool operator==(const Band&, const Band&) = default;
};

/// One horizontal band of the page with its height (LH) and maximum
/// inter-content blank run (WS).
struct TextLine {
  int index = 0;
  int y_top = 0;
  int y_bottom = 0;
  int x_left = 0;   // first inked column
  int x_right = 0;  // last inked column
  std::vector<Gap> gaps;

  int height() const noexcept { return y_bottom - y_top + 1; }
  int gap_count() const noexcept { return static_cast<int>(gaps.size()); }
  int max_word_space() const noexcept {
    int ws = 0;
    for (const auto& g : gaps) ws = std::max(ws, g.width);
    return ws;
  }
  Rect ink_rect() const noexcept { return {x_left, y_top, x_right - x_left + 1, height()}; }

  friend bool operator==(const TextLine&, const TextLine&) = default;
};

/// Ink count per row.
inline std::vector<int> horizontal_projection(const BinaryImage& bin) {
  std::vector<int> prof(static_cast<std::size_t>(bin.height()), 0);
  for (int y = 0; y < bin.height(); ++y) {
    int n = 0;
    for (auto v : bin.row(y)) n += v;
    prof[static_cast<std::size_t>(y)] = n;
  }
  return prof;
}

inline bool row_is_inked(int count, const ProfileConfig& cfg) noexcept {
  return count > 0 && count >= cfg.row_noise_floor;
}

/// Maximal inked row runs; runs separated by fewer than min_blank_rows blank
/// rows are merged.
inline std::vector<Band> segment_lines(const std::vector<int>& profile, const ProfileConfig& cfg) {
  cfg.validate();
  std::vector<Band> bands;
  const int n = static_cast<int>(profile.size());
  int y = 0;
  while (y < n) {
    if (!row_is_inked(profile[static_cast<std::size_t>(y)], cfg)) {
      ++y;
      continue;
    }
    int top = y;
    while (y < n && row_is_inked(profile[static_cast<std::size_t>(y)], cfg)) ++y;
    const int bottom = y - 1;
    if (!bands.empty() && top - bands.back().y_bottom - 1 < cfg.min_blank_rows) {
      bands.back().y_bottom = bottom;
    } else {
      bands.push_back({top, bottom});
    }
  }
  return bands;
}

/// Column blankness within the band; gaps are the blank runs of at least
/// min_gap_px strictly between the first and last inked columns.
inline TextLine analyze_gaps(const BinaryImage& bin, const Band& band, const ProfileConfig& cfg) {
  cfg.validate();
  if (band.y_top < 0 || band.y_bottom >= bin.height() || band.y_top > band.y_bottom) {
    throw Error(Errc::OutOfBounds, "band [" + std::to_string(band.y_top) + "," +
                                       std::to_string(band.y_bottom) + "] outside image");
  }
  const int w = bin.width();
  std::vector<std::uint8_t> inked(static_cast<std::size_t>(w), 0);
  for (int y = band.y_top; y <= band.y_bottom; ++y) {
    auto row = bin.row(y);
    for (int x = 0; x < w; ++x) inked[static_cast<std::size_t>(x)] |= row[static_cast<std::size_t>(x)];
  }
  const auto first = std::find(inked.begin(), inked.end(), 1);
  if (first == inked.end()) {
    throw Error(Errc::EmptyBand, "no ink in rows " + std::to_string(band.y_top) + ".." +
                                     std::to_string(band.y_bottom));
  }
  const int left = static_cast<int>(first - inked.begin());
  const int right = w - 1 - static_cast<int>(std::find(inked.rbegin(), inked.rend(), 1) - inked.rbegin());

  TextLine line;
  line.y_top = band.y_top;
  line.y_bottom = band.y_bottom;
  line.x_left = left;
  line.x_right = right;
  int x = left;
  while (x <= right) {
    if (inked[static_cast<std::size_t>(x)]) {
      ++x;
      continue;
    }
    const int start = x;
    while (x <= right && !inked[static_cast<std::size_t>(x)]) ++x;
    if (x - start >= cfg.min_gap_px) line.gaps.push_back({start, x - start});
  }
  return line;
}

inline std::vector<TextLine> build_page(const BinaryImage& bin, const ProfileConfig& cfg) {
  std::vector<TextLine> lines;
  for (const auto& band : segment_lines(horizontal_projection(bin), cfg)) {
    lines.push_back(analyze_gaps(bin, band, cfg));
    lines.back().index = static_cast<int>(lines.size()) - 1;
  }
  return lines;
}

}  // namespace tablescout
