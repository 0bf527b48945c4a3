#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tablescout/category.hpp"
#include "tablescout/config.hpp"
#include "tablescout/error.hpp"
#include "tablescout/preprocess.hpp"
#include "tablescout/profile.hpp"
#include "tablescout/raster.hpp"
#include "tablescout/thresholds.hpp"

namespace tablescout {

enum class LineClass { Text, TypeABlock, ColumnarCandidate, RuleLine };

constexpr std::string_view line_class_name(LineClass c) {
  switch (c) {
    case LineClass::Text: return "Text";
    case LineClass::TypeABlock: return "TypeABlock";
    case LineClass::ColumnarCandidate: return "ColumnarCandidate";
    case LineClass::RuleLine: return "RuleLine";
  }
  return "?";
}

inline std::optional<LineClass> parse_line_class(std::string_view s) {
  for (auto c : {LineClass::Text, LineClass::TypeABlock, LineClass::ColumnarCandidate, LineClass::RuleLine}) {
    if (line_class_name(c) == s) return c;
  }
  return std::nullopt;
}

/// The measurements the classifier looks at for one line.
struct LineFeatures {
  int height = 0;     // LH
  int gap_count = 0;
  int max_ws = 0;     // WS
};

inline LineFeatures features_of(const TextLine& l) { return {l.height(), l.gap_count(), l.max_word_space()}; }

/// Classifies one line given its own features and the WS of its neighbours
/// (nullopt when the neighbour does not exist). Branches are tested in order
/// and the first match wins.
inline LineClass classify_line(const LineFeatures& f, std::optional<int> prev_ws, std::optional<int> next_ws,
                               const PageThresholds& th) {
  const double lh = f.height;
  if (lh >= 3.0 * th.lh && f.gap_count == 0) return LineClass::TypeABlock;
  if (f.max_ws > th.ws && lh <= th.lh) return LineClass::ColumnarCandidate;
  const bool neighbour_wide = (prev_ws && *prev_ws > th.ws) || (next_ws && *next_ws > th.ws);
  if (f.gap_count == 0 && lh < th.lh && neighbour_wide) return LineClass::RuleLine;
  return LineClass::Text;
}

inline std::vector<LineClass> classify_lines(std::span<const TextLine> lines, const PageThresholds& th) {
  std::vector<LineClass> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::optional<int> prev = i > 0 ? std::optional(lines[i - 1].max_word_space()) : std::nullopt;
    const std::optional<int> next =
        i + 1 < lines.size() ? std::optional(lines[i + 1].max_word_space()) : std::nullopt;
    out.push_back(classify_line(features_of(lines[i]), prev, next, th));
  }
  return out;
}

struct TableRegion {
  Rect rect;
  Category category = Category::C;
  std::vector<int> line_indices;  // non-Text member lines
  int rule_line_count = 0;

  friend bool operator==(const TableRegion&, const TableRegion&) = default;
};

/// True when the line sits entirely inside the top or bottom exclusion zone.
inline bool in_header_footer_zone(const TextLine& l, int page_height, double frac) {
  if (frac <= 0.0) return false;
  const double zone = frac * page_height;
  return l.y_bottom < zone || l.y_top >= page_height - zone;
}

/// Groups classified lines into table regions. TypeABlock lines become
/// category-A regions on their own; runs of ColumnarCandidate/RuleLine lines
/// (tolerating up to max_interior_text_lines consecutive Text lines inside)
/// with at least min_table_lines members become B (two or more rules) or C.
inline std::vector<TableRegion> merge_regions(std::span<const LineClass> classes, std::span<const TextLine> lines,
                                              const DetectorConfig& cfg, int page_height = 0) {
  cfg.validate();
  if (classes.size() != lines.size()) {
    throw Error(Errc::InvalidArgument, "classes and lines differ in length");
  }
  std::vector<TableRegion> regions;
  std::vector<int> run;
  int pending_text = 0;

  auto bounding = [&](std::span<const int> members) {
    const auto& first = lines[static_cast<std::size_t>(members.front())];
    const auto& last = lines[static_cast<std::size_t>(members.back())];
    int left = first.x_left, right = first.x_right;
    for (int m : members) {
      left = std::min(left, lines[static_cast<std::size_t>(m)].x_left);
      right = std::max(right, lines[static_cast<std::size_t>(m)].x_right);
    }
    return Rect{left, first.y_top, right - left + 1, last.y_bottom - first.y_top + 1};
  };

  auto close_run = [&] {
    if (static_cast<int>(run.size()) >= cfg.min_table_lines) {
      TableRegion r;
      r.rect = bounding(run);
      r.line_indices = run;
      for (int m : run) r.rule_line_count += classes[static_cast<std::size_t>(m)] == LineClass::RuleLine;
      r.category = r.rule_line_count >= 2 ? Category::B : Category::C;
      regions.push_back(std::move(r));
    }
    run.clear();
    pending_text = 0;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    LineClass c = classes[i];
    if (c != LineClass::Text && in_header_footer_zone(lines[i], page_height, cfg.header_footer_exclusion_frac)) {
      c = LineClass::Text;
    }
    switch (c) {
      case LineClass::TypeABlock: {
        close_run();
        const int idx = static_cast<int>(i);
        regions.push_back({lines[i].ink_rect(), Category::A, {idx}, 0});
        break;
      }
      case LineClass::ColumnarCandidate:
      case LineClass::RuleLine:
        run.push_back(static_cast<int>(i));
        pending_text = 0;
        break;
      case LineClass::Text:
        if (!run.empty() && ++pending_text > cfg.max_interior_text_lines) close_run();
        break;
    }
  }
  close_run();
  return regions;
}

struct LineRecord {
  int y_top = 0;
  int y_bottom = 0;
  int height = 0;
  int gap_count = 0;
  int max_ws = 0;
  LineClass cls = LineClass::Text;
  bool excluded = false;  // inside the header/footer zone

  friend bool operator==(const LineRecord&, const LineRecord&) = default;
};

struct DetectionReport {
  std::string page_id;
  int page_width = 0;
  int page_height = 0;
  std::optional<PageThresholds> thresholds;  // absent when no standard line exists
  std::vector<LineRecord> lines;
  std::vector<TableRegion> regions;
  std::string config_fingerprint;
  std::optional<std::string> diagnostic;  // "NoTextLine" when detection could not run

  friend bool operator==(const DetectionReport&, const DetectionReport&) = default;
};

/// Runs the chain on an already preprocessed page.
inline DetectionReport detect_binary(const BinaryImage& bin, const RunConfig& cfg, std::string page_id = {}) {
  cfg.validate();
  DetectionReport rep;
  rep.page_id = std::move(page_id);
  rep.page_width = bin.width();
  rep.page_height = bin.height();
  rep.config_fingerprint = config_fingerprint(cfg);

  const auto lines = build_page(bin, cfg.profile);
  for (const auto& l : lines) {
    rep.lines.push_back({l.y_top, l.y_bottom, l.height(), l.gap_count(), l.max_word_space(), LineClass::Text,
                         in_header_footer_zone(l, bin.height(), cfg.detector.header_footer_exclusion_frac)});
  }
  try {
    rep.thresholds = compute_thresholds(lines, cfg.alpha_ws, cfg.alpha_lh);
  } catch (const Error& e) {
    if (e.code() != Errc::NoTextLine) throw;
    rep.diagnostic = std::string(errc_name(Errc::NoTextLine));
    return rep;
  }
  const auto classes = classify_lines(lines, *rep.thresholds);
  for (std::size_t i = 0; i < classes.size(); ++i) rep.lines[i].cls = classes[i];
  rep.regions = merge_regions(classes, lines, cfg.detector, bin.height());
  return rep;
}

/// Full pipeline: preprocessing, line extraction, thresholds, line
/// classification and region grouping.
inline DetectionReport detect(const GrayImage& gray, const RunConfig& cfg, std::string page_id = {}) {
  cfg.validate();
  return detect_binary(preprocess(gray, cfg.preprocess), cfg, std::move(page_id));
}

inline std::vector<std::pair<Rect, Category>> overlay_regions(const DetectionReport& rep) {
  std::vector<std::pair<Rect, Category>> out;
  for (const auto& r : rep.regions) out.emplace_back(r.rect, r.category);
  return out;
}

}  // namespace tablescout
