#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tablescout/category.hpp"
#include "tablescout/detector.hpp"
#include "tablescout/error.hpp"
#include "tablescout/raster.hpp"

namespace tablescout {

struct TruthEntry {
  Rect rect;
  Category category = Category::A;

  friend bool operator==(const TruthEntry&, const TruthEntry&) = default;
};

struct GroundTruth {
  std::string page_id;
  int page_width = 0;   // 0 when unknown
  int page_height = 0;
  std::vector<TruthEntry> entries;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

inline double iou(const Rect& a, const Rect& b) {
  const long long ix = std::max(0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const long long iy = std::max(0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const long long inter = ix * iy;
  const long long uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

struct MatchedPair {
  int truth = 0;
  int detected = 0;
  double iou = 0.0;
  bool category_agrees = false;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<int> unmatched_truth;
  std::vector<int> unmatched_detected;
};

/// Greedy one-to-one matching in descending IoU order. Only pairs with
/// IoU >= iou_min are eligible. Ties go to the lower truth index, then the
/// lower detection index.
inline MatchResult match_regions(std::span<const TableRegion> detected, const GroundTruth& truth,
                                 double iou_min = 0.5) {
  if (!(iou_min > 0.0 && iou_min <= 1.0)) throw Error(Errc::InvalidArgument, "iou_min must lie in (0,1]");
  struct Candidate {
    double iou;
    int t, d;
  };
  std::vector<Candidate> cands;
  for (int t = 0; t < static_cast<int>(truth.entries.size()); ++t) {
    for (int d = 0; d < static_cast<int>(detected.size()); ++d) {
      const double v = iou(truth.entries[static_cast<std::size_t>(t)].rect, detected[static_cast<std::size_t>(d)].rect);
      if (v >= iou_min) cands.push_back({v, t, d});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.iou, a.t, a.d) < std::tie(a.iou, b.t, b.d);
  });
  std::vector<bool> t_used(truth.entries.size(), false), d_used(detected.size(), false);
  MatchResult res;
  for (const auto& c : cands) {
    if (t_used[static_cast<std::size_t>(c.t)] || d_used[static_cast<std::size_t>(c.d)]) continue;
    t_used[static_cast<std::size_t>(c.t)] = d_used[static_cast<std::size_t>(c.d)] = true;
    res.pairs.push_back({c.t, c.d, c.iou,
                         truth.entries[static_cast<std::size_t>(c.t)].category ==
                             detected[static_cast<std::size_t>(c.d)].category});
  }
  std::sort(res.pairs.begin(), res.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.truth < b.truth; });
  for (int t = 0; t < static_cast<int>(t_used.size()); ++t) {
    if (!t_used[static_cast<std::size_t>(t)]) res.unmatched_truth.push_back(t);
  }
  for (int d = 0; d < static_cast<int>(d_used.size()); ++d) {
    if (!d_used[static_cast<std::size_t>(d)]) res.unmatched_detected.push_back(d);
  }
  return res;
}

/// Outcome of evaluating one page: one flag per truth entry plus the
/// detections that matched nothing.
struct PageResult {
  std::string page_id;
  std::vector<Category> truth_categories;
  std::vector<bool> truth_correct;
  std::vector<std::optional<Category>> matched_category;  // detected category of the match
  int false_positives = 0;
};

inline PageResult evaluate_page(std::span<const TableRegion> detected, const GroundTruth& truth,
                                double iou_min = 0.5) {
  const auto m = match_regions(detected, truth, iou_min);
  PageResult p;
  p.page_id = truth.page_id;
  for (const auto& e : truth.entries) p.truth_categories.push_back(e.category);
  p.truth_correct.assign(truth.entries.size(), false);
  p.matched_category.assign(truth.entries.size(), std::nullopt);
  for (const auto& pair : m.pairs) {
    p.truth_correct[static_cast<std::size_t>(pair.truth)] = true;
    p.matched_category[static_cast<std::size_t>(pair.truth)] = detected[static_cast<std::size_t>(pair.detected)].category;
  }
  p.false_positives = static_cast<int>(m.unmatched_detected.size());
  return p;
}

struct CategoryTally {
  int total = 0;
  int correct = 0;
};

/// 100 * correct / total rounded half-up to one decimal, e.g. "82.7".
/// Exact integer arithmetic keeps the rounding platform independent.
inline std::string format_percent(int correct, int total) {
  if (total <= 0) return "n/a";
  const long long tenths = (2000LL * correct + total) / (2LL * total);
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

struct EvalSummary {
  std::array<CategoryTally, 3> per_category{};
  CategoryTally overall;
  int pages = 0;
  int false_positives = 0;
  // confusion[truth][detected]; a fourth column counts truths left unmatched
  std::array<std::array<int, 4>, 3> confusion{};

  std::string accuracy(Category c) const {
    const auto& t = per_category[static_cast<std::size_t>(category_index(c))];
    return format_percent(t.correct, t.total);
  }
  std::string overall_accuracy() const { return format_percent(overall.correct, overall.total); }
};

/// Order-independent aggregation over page results.
inline EvalSummary aggregate(std::span<const PageResult> pages) {
  if (pages.empty()) throw Error(Errc::EmptyCorpus, "no pages to aggregate");
  EvalSummary s;
  s.pages = static_cast<int>(pages.size());
  for (const auto& p : pages) {
    for (std::size_t i = 0; i < p.truth_categories.size(); ++i) {
      const auto ci = static_cast<std::size_t>(category_index(p.truth_categories[i]));
      auto& tally = s.per_category[ci];
      ++tally.total;
      ++s.overall.total;
      if (p.truth_correct[i]) {
        ++tally.correct;
        ++s.overall.correct;
      }
      const auto& mc = i < p.matched_category.size() ? p.matched_category[i] : std::nullopt;
      ++s.confusion[ci][mc ? static_cast<std::size_t>(category_index(*mc)) : 3];
    }
    s.false_positives += p.false_positives;
  }
  return s;
}

/// One page per document with one table each, reproducing the reference
/// per-category counts (A 91/110, B 91/135, C 40/53).
inline std::vector<PageResult> table1_fixture() {
  struct Row {
    Category cat;
    int total, correct;
  };
  constexpr std::array<Row, 3> rows{{{Category::A, 110, 91}, {Category::B, 135, 91}, {Category::C, 53, 40}}};
  std::vector<PageResult> pages;
  for (const auto& row : rows) {
    for (int i = 0; i < row.total; ++i) {
      PageResult p;
      p.page_id = std::string(category_name(row.cat)) + "-" + std::to_string(i);
      p.truth_categories = {row.cat};
      p.truth_correct = {i < row.correct};
      p.matched_category = {i < row.correct ? std::optional(row.cat) : std::nullopt};
      pages.push_back(std::move(p));
    }
  }
  return pages;
}

}  // namespace tablescout
