#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "tablescout/error.hpp"
#include "tablescout/preprocess.hpp"
#include "tablescout/profile.hpp"
#include "tablescout/thresholds.hpp"

namespace tablescout {

struct DetectorConfig {
  int min_table_lines = 3;
  int max_interior_text_lines = 1;  // tolerated Text lines inside a run (multiline cells/headings)
  double header_footer_exclusion_frac = 0.0;

  void validate() const {
    if (min_table_lines < 2) throw Error(Errc::InvalidArgument, "min_table_lines must be >= 2");
    if (max_interior_text_lines < 0) throw Error(Errc::InvalidArgument, "max_interior_text_lines must be >= 0");
    if (!(header_footer_exclusion_frac >= 0.0 && header_footer_exclusion_frac < 0.5)) {
      throw Error(Errc::InvalidArgument, "header_footer_exclusion_frac must lie in [0,0.5)");
    }
  }

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

/// Everything that influences a detection or evaluation run.
struct RunConfig {
  PreprocessConfig preprocess;
  ProfileConfig profile;
  DetectorConfig detector;
  double alpha_ws = kDefaultAlphaWs;
  double alpha_lh = kDefaultAlphaLh;
  double iou_min = 0.5;

  void validate() const {
    preprocess.validate();
    profile.validate();
    detector.validate();
    validate_alphas(alpha_ws, alpha_lh);
    if (!(iou_min > 0.0 && iou_min <= 1.0)) throw Error(Errc::InvalidArgument, "iou_min must lie in (0,1]");
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline void append_kv(std::string& s, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.17g;", key, v);
  s += buf;
}

inline void append_kv(std::string& s, const char* key, int v) {
  s += key;
  s += '=';
  s += std::to_string(v);
  s += ';';
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace detail

/// Canonical key=value rendering; the order is fixed and part of the format.
inline std::string canonical_config_string(const RunConfig& c) {
  std::string s;
  detail::append_kv(s, "bin_window", c.preprocess.bin_window);
  detail::append_kv(s, "bin_k", c.preprocess.bin_k);
  detail::append_kv(s, "bin_R", c.preprocess.bin_R);
  detail::append_kv(s, "border_margin_frac", c.preprocess.border_margin_frac);
  detail::append_kv(s, "dilate_w", c.preprocess.dilate_w);
  detail::append_kv(s, "dilate_h", c.preprocess.dilate_h);
  detail::append_kv(s, "row_noise_floor", c.profile.row_noise_floor);
  detail::append_kv(s, "min_blank_rows", c.profile.min_blank_rows);
  detail::append_kv(s, "min_gap_px", c.profile.min_gap_px);
  detail::append_kv(s, "min_table_lines", c.detector.min_table_lines);
  detail::append_kv(s, "max_interior_text_lines", c.detector.max_interior_text_lines);
  detail::append_kv(s, "header_footer_exclusion_frac", c.detector.header_footer_exclusion_frac);
  detail::append_kv(s, "alpha_ws", c.alpha_ws);
  detail::append_kv(s, "alpha_lh", c.alpha_lh);
  detail::append_kv(s, "iou_min", c.iou_min);
  return s;
}

/// 16 hex digits of FNV-1a/64 over the canonical config string.
inline std::string config_fingerprint(const RunConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(detail::fnv1a64(canonical_config_string(c))));
  return buf;
}

}  // namespace tablescout
