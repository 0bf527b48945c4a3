#pragma once

#include <span>
#include <string>

#include "tablescout/error.hpp"
#include "tablescout/profile.hpp"

namespace tablescout {

constexpr double kDefaultAlphaWs = 1.5;
constexpr double kDefaultAlphaLh = 1.25;

/// Page-local reference measurements and the thresholds derived from them.
/// The thresholds satisfy WS_std < ws < 2 WS_std and LH_std < lh < 1.5 LH_std.
struct PageThresholds {
  int standard_line_index = 0;
  int ws_std = 0;  // widest gap of the standard line
  int lh_std = 0;  // height of the standard line
  double ws = 0.0;
  double lh = 0.0;
  double alpha_ws = kDefaultAlphaWs;
  double alpha_lh = kDefaultAlphaLh;

  friend bool operator==(const PageThresholds&, const PageThresholds&) = default;
};

inline void validate_alphas(double alpha_ws, double alpha_lh) {
  if (!(alpha_ws > 1.0 && alpha_ws < 2.0)) {
    throw Error(Errc::AlphaOutOfRange, "alpha_ws must lie in the open interval (1,2), got " +
                                           std::to_string(alpha_ws));
  }
  if (!(alpha_lh > 1.0 && alpha_lh < 1.5)) {
    throw Error(Errc::AlphaOutOfRange, "alpha_lh must lie in the open interval (1,1.5), got " +
                                           std::to_string(alpha_lh));
  }
}

/// The line with the most gaps; the topmost one wins ties.
inline int select_standard_line(std::span<const TextLine> lines) {
  int best = -1, best_count = 0;
  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    const int n = lines[static_cast<std::size_t>(i)].gap_count();
    if (n > best_count) {
      best = i;
      best_count = n;
    }
  }
  if (best < 0) throw Error(Errc::NoTextLine, "no line on the page contains a gap");
  return best;
}

inline PageThresholds compute_thresholds(std::span<const TextLine> lines, double alpha_ws = kDefaultAlphaWs,
                                         double alpha_lh = kDefaultAlphaLh) {
  validate_alphas(alpha_ws, alpha_lh);
  PageThresholds th;
  th.standard_line_index = select_standard_line(lines);
  const auto& std_line = lines[static_cast<std::size_t>(th.standard_line_index)];
  th.ws_std = std_line.max_word_space();
  th.lh_std = std_line.height();
  th.alpha_ws = alpha_ws;
  th.alpha_lh = alpha_lh;
  th.ws = alpha_ws * th.ws_std;
  th.lh = alpha_lh * th.lh_std;
  return th;
}

}  // namespace tablescout
