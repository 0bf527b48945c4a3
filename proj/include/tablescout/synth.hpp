#pragma once

// Synthetic scanned pages with exact ground truth. Words are solid ink
// rectangles split into glyph blocks; tables are drawn in the three
// structural categories.
//
// Randomness comes from SplitMix64 (Steele, Lea & Flood 2014):
//   state += 0x9E3779B97F4A7C15
//   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)
// and integers in [lo, hi] are drawn as lo + next() % (hi - lo + 1). Both
// are part of the fixture format: changing either changes every page.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "tablescout/category.hpp"
#include "tablescout/error.hpp"
#include "tablescout/evaluator.hpp"
#include "tablescout/profile.hpp"
#include "tablescout/raster.hpp"

namespace tablescout {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform-ish integer in [lo, hi] (modulo reduction).
  int uniform(int lo, int hi) {
    if (hi <= lo) return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  /// Double in [0, 1) from the top 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct IntRange {
  int lo = 0;
  int hi = 0;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct Paragraph {
  int lines = 1;
  friend bool operator==(const Paragraph&, const Paragraph&) = default;
};
/// Running header: each line holds a left-aligned title and a right-aligned
/// page number, leaving one wide gap in between.
struct RunningHeader {
  int lines = 1;
  friend bool operator==(const RunningHeader&, const RunningHeader&) = default;
};
struct TableA {
  int rows = 3;
  int cols = 3;
  int rule_px = 2;
  friend bool operator==(const TableA&, const TableA&) = default;
};
struct TableB {
  int rows = 3;
  int cols = 3;
  int rule_px = 2;
  friend bool operator==(const TableB&, const TableB&) = default;
};
struct TableC {
  int rows = 3;
  int cols = 3;
  int col_gap_px = 30;
  friend bool operator==(const TableC&, const TableC&) = default;
};

using Block = std::variant<Paragraph, RunningHeader, TableA, TableB, TableC>;

struct NoiseSpec {
  double salt_pepper_rate = 0.0;
  bool border_smear = false;
  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct PageSpec {
  std::uint64_t seed = 0;
  int page_w = 800;
  int page_h = 1100;
  int margin = 40;
  int text_line_height = 12;
  int line_gap = 8;  // blank rows between consecutive lines
  IntRange word_len_range{20, 70};
  IntRange word_gap_range{7, 10};
  IntRange char_gap_range{1, 2};
  std::vector<Block> blocks;
  NoiseSpec noise;

  friend bool operator==(const PageSpec&, const PageSpec&) = default;
};

struct SynthPage {
  GrayImage image;
  GroundTruth truth;
  std::vector<Band> line_bands;  // every band a noise-free page segments into
};

constexpr std::uint8_t kPaper = 255;
constexpr std::uint8_t kInk = 0;

inline void validate(const PageSpec& s) {
  auto bad = [](const std::string& m) { throw Error(Errc::InvalidArgument, "page spec: " + m); };
  if (s.page_w < 64 || s.page_h < 64) bad("page must be at least 64x64");
  if (s.margin < 1 || 2 * s.margin >= s.page_w - 32) bad("margin leaves no text area");
  if (s.text_line_height < 3) bad("text_line_height must be >= 3");
  if (s.line_gap < 3) bad("line_gap must be >= 3");
  for (const auto* r : {&s.word_len_range, &s.word_gap_range, &s.char_gap_range}) {
    if (r->lo < 0 || r->hi < r->lo) bad("ranges must satisfy 0 <= lo <= hi");
  }
  if (s.word_len_range.lo < 4) bad("word_len_range.lo must be >= 4");
  if (s.word_gap_range.lo < 3) bad("word_gap_range.lo must be >= 3");
  if (s.noise.salt_pepper_rate < 0.0 || s.noise.salt_pepper_rate > 0.5) bad("salt_pepper_rate must lie in [0,0.5]");
  for (const auto& b : s.blocks) {
    std::visit(
        [&](const auto& blk) {
          using T = std::decay_t<decltype(blk)>;
          if constexpr (std::is_same_v<T, Paragraph> || std::is_same_v<T, RunningHeader>) {
            if (blk.lines < 1) bad("text blocks need at least one line");
          } else {
            if (blk.rows < 3) bad("tables need at least 3 rows");
            if (blk.cols < 2) bad("tables need at least 2 columns");
            if constexpr (std::is_same_v<T, TableC>) {
              // any threshold satisfies ws < 2 * WS <= 2 * max word gap
              if (blk.col_gap_px <= 2 * s.word_gap_range.hi) bad("TableC col_gap_px must exceed 2 * word_gap max");
            } else {
              if (blk.rule_px < 1) bad("rule_px must be >= 1");
            }
          }
        },
        b);
  }
}

namespace synth_detail {

class Painter {
 public:
  Painter(const PageSpec& spec, SplitMix64& rng)
      : spec_(spec), rng_(rng), img_(spec.page_w, spec.page_h, kPaper) {}

  GrayImage& image() { return img_; }

  void fill(int x, int y, int w, int h) {
    for (int yy = std::max(0, y); yy < std::min(img_.height(), y + h); ++yy) {
      for (int xx = std::max(0, x); xx < std::min(img_.width(), x + w); ++xx) img_.set(xx, yy, kInk);
    }
  }

  /// Word of exactly `len` pixels split into glyph blocks; returns the right
  /// edge (exclusive).
  int word(int x, int y, int len) {
    const int end = x + len;
    int cx = x;
    while (cx < end) {
      int gw = std::min(rng_.uniform(4, 9), end - cx);
      // never leave a sliver narrower than a glyph at the end
      if (end - (cx + gw) < 4) gw = end - cx;
      fill(cx, y, gw, spec_.text_line_height);
      cx += gw;
      if (cx < end) {
        const int cg = rng_.uniform(spec_.char_gap_range.lo, spec_.char_gap_range.hi);
        cx = std::min(end - 4, cx + cg);
        if (cx + 4 > end) break;
      }
    }
    return end;
  }

  /// Words from x0 until the line reaches `limit`; returns the last ink
  /// column + 1.
  int words_until(int x0, int y, int limit) {
    int x = x0, right = x0;
    for (;;) {
      int len = rng_.uniform(spec_.word_len_range.lo, spec_.word_len_range.hi);
      if (x + len > limit) {
        if (limit - x >= spec_.word_len_range.lo) len = limit - x;
        else break;
      }
      right = word(x, y, len);
      x = right + rng_.uniform(spec_.word_gap_range.lo, spec_.word_gap_range.hi);
      if (x >= limit) break;
    }
    return right;
  }

  /// One or two words of total width <= max_w; returns the ink width.
  int cell_text(int x, int y, int max_w) {
    const int lo = std::min(spec_.word_len_range.lo, max_w);
    if (max_w >= 2 * lo + spec_.word_gap_range.hi && rng_.uniform(0, 2) == 0) {
      const int gap = rng_.uniform(spec_.word_gap_range.lo, spec_.word_gap_range.hi);
      const int avail = max_w - gap;
      const int l1 = rng_.uniform(lo, std::max(lo, avail - lo));
      const int l2 = rng_.uniform(lo, std::max(lo, avail - l1));
      word(x, y, l1);
      return word(x + l1 + gap, y, l2) - x;
    }
    return word(x, y, rng_.uniform(lo, max_w)) - x;
  }

 private:
  const PageSpec& spec_;
  SplitMix64& rng_;
  GrayImage img_;
};

}  // namespace synth_detail

/// Renders the page described by `spec`. Identical specs give identical
/// bytes.
inline SynthPage generate(const PageSpec& spec) {
  validate(spec);
  SplitMix64 rng(spec.seed);
  synth_detail::Painter paint(spec, rng);
  SynthPage page;
  page.truth.page_width = spec.page_w;
  page.truth.page_height = spec.page_h;

  const int th = spec.text_line_height;
  const int left = spec.margin;
  const int right = spec.page_w - spec.margin;
  const int text_w = right - left;
  const int block_gap = 2 * spec.line_gap;
  const int bottom_limit = spec.page_h - spec.margin;
  int y = spec.margin;

  auto need = [&](int h) {
    if (y + h > bottom_limit) {
      throw Error(Errc::SpecOverflow, "blocks need " + std::to_string(y + h) + " rows but the page allows " +
                                          std::to_string(bottom_limit));
    }
  };

  // column widths for a table, scaled down to fit the text area
  auto column_widths = [&](int cols, int sep) {
    std::vector<int> widths(static_cast<std::size_t>(cols));
    for (auto& w : widths) w = rng.uniform(2 * spec.word_len_range.lo, 2 * spec.word_len_range.hi);
    long total = sep * (cols - 1);
    for (int w : widths) total += w;
    if (total > text_w) {
      const double scale = static_cast<double>(text_w - sep * (cols - 1)) / static_cast<double>(total - sep * (cols - 1));
      for (auto& w : widths) w = static_cast<int>(w * scale);
    }
    for (int w : widths) {
      if (w < spec.word_len_range.lo) throw Error(Errc::SpecOverflow, "table columns do not fit the page width");
    }
    return widths;
  };

  // rows of cell text aligned on column starts; returns rightmost ink column + 1
  auto cell_row = [&](int row_y, int x0, const std::vector<int>& widths, int sep) {
    int x = x0, far_right = x0;
    for (int w : widths) {
      far_right = std::max(far_right, x + paint.cell_text(x, row_y, w));
      x += w + sep;
    }
    return far_right;
  };

  bool first = true;
  for (const auto& block : spec.blocks) {
    if (!first) y += block_gap;
    first = false;
    std::visit(
        [&](const auto& blk) {
          using T = std::decay_t<decltype(blk)>;
          if constexpr (std::is_same_v<T, Paragraph>) {
            need(blk.lines * th + (blk.lines - 1) * spec.line_gap);
            for (int i = 0; i < blk.lines; ++i) {
              const bool last = i + 1 == blk.lines && blk.lines > 1;
              const int limit = last ? left + text_w * rng.uniform(40, 80) / 100 : right;
              paint.words_until(left, y, limit);
              page.line_bands.push_back({y, y + th - 1});
              y += th + (i + 1 < blk.lines ? spec.line_gap : 0);
            }
          } else if constexpr (std::is_same_v<T, RunningHeader>) {
            need(blk.lines * th + (blk.lines - 1) * spec.line_gap);
            for (int i = 0; i < blk.lines; ++i) {
              const int title_words = rng.uniform(2, 4);
              int x = left;
              for (int w = 0; w < title_words; ++w) {
                x = paint.word(x, y, rng.uniform(spec.word_len_range.lo, spec.word_len_range.hi));
                x += rng.uniform(spec.word_gap_range.lo, spec.word_gap_range.hi);
              }
              const int num_len = rng.uniform(8, 20);
              paint.word(right - num_len, y, num_len);
              page.line_bands.push_back({y, y + th - 1});
              y += th + (i + 1 < blk.lines ? spec.line_gap : 0);
            }
          } else if constexpr (std::is_same_v<T, TableC>) {
            need(blk.rows * th + (blk.rows - 1) * spec.line_gap);
            const auto widths = column_widths(blk.cols, blk.col_gap_px);
            const int top = y;
            int far_right = left;
            for (int r = 0; r < blk.rows; ++r) {
              far_right = std::max(far_right, cell_row(y, left, widths, blk.col_gap_px));
              page.line_bands.push_back({y, y + th - 1});
              y += th + (r + 1 < blk.rows ? spec.line_gap : 0);
            }
            page.truth.entries.push_back({Rect{left, top, far_right - left, y - top}, Category::C});
          } else if constexpr (std::is_same_v<T, TableB>) {
            const int sep = 3 * spec.word_gap_range.hi;
            const int rule_gap = spec.line_gap / 2 + 1;
            const int height = 3 * blk.rule_px + 4 * rule_gap + blk.rows * th + (blk.rows - 2) * spec.line_gap;
            need(height);
            const auto widths = column_widths(blk.cols, sep);
            int table_w = sep * (blk.cols - 1);
            for (int w : widths) table_w += w;
            const int top = y;
            auto rule = [&] {
              paint.fill(left, y, table_w, blk.rule_px);
              page.line_bands.push_back({y, y + blk.rule_px - 1});
              y += blk.rule_px;
            };
            rule();
            y += rule_gap;
            cell_row(y, left, widths, sep);  // header
            page.line_bands.push_back({y, y + th - 1});
            y += th + rule_gap;
            rule();
            y += rule_gap;
            for (int r = 1; r < blk.rows; ++r) {
              cell_row(y, left, widths, sep);
              page.line_bands.push_back({y, y + th - 1});
              y += th + (r + 1 < blk.rows ? spec.line_gap : 0);
            }
            y += rule_gap;
            rule();
            page.truth.entries.push_back({Rect{left, top, table_w, y - top}, Category::B});
          } else if constexpr (std::is_same_v<T, TableA>) {
            constexpr int pad = 4;
            const int sep = 2 * pad + blk.rule_px;
            const int row_h = blk.rule_px + 2 * pad + th;
            const int height = blk.rows * row_h + blk.rule_px;
            if (height < 4 * th) throw Error(Errc::InvalidArgument, "TableA must be at least 4 text lines tall");
            need(height);
            auto widths = column_widths(blk.cols, sep);
            int table_w = blk.rule_px;
            for (int w : widths) table_w += w + 2 * pad + blk.rule_px;
            if (table_w > text_w) {
              // the outer rules and padding did not count toward the fit
              const int excess = table_w - text_w;
              widths.back() -= excess;
              table_w -= excess;
              if (widths.back() < spec.word_len_range.lo) {
                throw Error(Errc::SpecOverflow, "table columns do not fit the page width");
              }
            }
            const int top = y;
            for (int r = 0; r <= blk.rows; ++r) paint.fill(left, top + r * row_h, table_w, blk.rule_px);
            int x = left;
            for (std::size_t c = 0; c <= widths.size(); ++c) {
              paint.fill(x, top, blk.rule_px, height);
              if (c < widths.size()) x += blk.rule_px + 2 * pad + widths[c];
            }
            for (int r = 0; r < blk.rows; ++r) {
              int cx = left + blk.rule_px + pad;
              const int cy = top + r * row_h + blk.rule_px + pad;
              for (int w : widths) {
                paint.cell_text(cx, cy, w);
                cx += w + 2 * pad + blk.rule_px;
              }
            }
            page.line_bands.push_back({top, top + height - 1});
            y = top + height;
            page.truth.entries.push_back({Rect{left, top, table_w, height}, Category::A});
          }
        },
        block);
  }

  auto& img = paint.image();
  if (spec.noise.border_smear) {
    // scanner shadow along the left edge and a strip along the top
    const int sw = rng.uniform(3, 8);
    paint.fill(0, 0, sw, spec.page_h);
    paint.fill(0, 0, spec.page_w, rng.uniform(2, 4));
  }
  if (spec.noise.salt_pepper_rate > 0.0) {
    for (auto& px : img.pixels()) {
      if (rng.unit() < spec.noise.salt_pepper_rate) px = (rng.next() & 1u) ? kPaper : kInk;
    }
  }
  page.image = std::move(img);
  return page;
}

/// Category of a desk-suite page; Control pages hold paragraphs only.
enum class PageKind { A, B, C, Control };

inline std::string page_kind_name(PageKind k) {
  switch (k) {
    case PageKind::A: return "A";
    case PageKind::B: return "B";
    case PageKind::C: return "C";
    case PageKind::Control: return "control";
  }
  return "?";
}

/// A randomized but seed-determined layout: paragraph(s), one table of the
/// requested kind, paragraph(s). Control pages hold 2-4 paragraphs.
inline PageSpec page_spec_for(PageKind kind, std::uint64_t seed) {
  PageSpec s;
  s.seed = seed;
  SplitMix64 rng(seed ^ 0xD1B54A32D192ED03ull);
  if (kind == PageKind::Control) {
    const int n = rng.uniform(2, 4);
    for (int i = 0; i < n; ++i) s.blocks.push_back(Paragraph{rng.uniform(3, 8)});
    return s;
  }
  s.blocks.push_back(Paragraph{rng.uniform(2, 6)});
  const int cols = rng.uniform(2, 5);
  switch (kind) {
    case PageKind::A: s.blocks.push_back(TableA{rng.uniform(3, 7), cols, rng.uniform(1, 3)}); break;
    case PageKind::B: s.blocks.push_back(TableB{rng.uniform(4, 9), cols, rng.uniform(1, 3)}); break;
    case PageKind::C: s.blocks.push_back(TableC{rng.uniform(3, 9), cols, 3 * s.word_gap_range.hi}); break;
    case PageKind::Control: break;
  }
  s.blocks.push_back(Paragraph{rng.uniform(2, 6)});
  if (rng.uniform(0, 1) == 1) s.blocks.push_back(Paragraph{rng.uniform(2, 5)});
  return s;
}

struct SuitePage {
  std::string page_id;
  PageKind kind;
  PageSpec spec;
};

/// Fixed-seed 90-page corpus, 30 pages per table category.
inline std::vector<SuitePage> desk_suite() {
  std::vector<SuitePage> out;
  for (auto kind : {PageKind::A, PageKind::B, PageKind::C}) {
    for (int i = 0; i < 30; ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "desk-%s-%02d", page_kind_name(kind).c_str(), i);
      const auto seed = 1000ull * (static_cast<std::uint64_t>(kind) + 1) + static_cast<std::uint64_t>(i);
      out.push_back({id, kind, page_spec_for(kind, seed)});
    }
  }
  return out;
}

/// Ten paragraph-only pages for false-positive checks.
inline std::vector<SuitePage> control_suite() {
  std::vector<SuitePage> out;
  for (int i = 0; i < 10; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "control-%02d", i);
    out.push_back({id, PageKind::Control, page_spec_for(PageKind::Control, 9000ull + static_cast<std::uint64_t>(i))});
  }
  return out;
}

}  // namespace tablescout
