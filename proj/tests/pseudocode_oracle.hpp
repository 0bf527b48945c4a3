#pragma once

// Line-by-line transcription of the reference detection loop, kept
// independent from tablescout::classify_line. Each `if` of the reference
// loop sets its own flag; the first flag raised (listing order) decides.

#include <optional>
#include <random>
#include <vector>

#include "tablescout/detector.hpp"

namespace tablescout::testing {

struct OracleTuple {
  int LH;
  int gaps;
  int WS;
  std::optional<int> WS_prev;  // nullopt at the page boundary
  std::optional<int> WS_next;
};

inline LineClass pseudocode_oracle(const OracleTuple& t, double ws, double lh) {
  bool type_a = false, type_bc = false, rule = false;
  // if LH>=3*lh AND number of gaps= 0
  if (t.LH >= 3 * lh && t.gaps == 0) type_a = true;
  // if WS>ws AND LH<=lh
  if (t.WS > ws && t.LH <= lh) type_bc = true;
  // if number of gaps=0 AND LH<lh AND (WS(x-1)> ws OR WS(x+1)>ws)
  const bool prev_wide = t.WS_prev.has_value() ? *t.WS_prev > ws : false;
  const bool next_wide = t.WS_next.has_value() ? *t.WS_next > ws : false;
  if (t.gaps == 0 && t.LH < lh && (prev_wide || next_wide)) rule = true;

  if (type_a) return LineClass::TypeABlock;
  if (type_bc) return LineClass::ColumnarCandidate;
  if (rule) return LineClass::RuleLine;
  return LineClass::Text;
}

/// Random tuple concentrated around the thresholds so every boundary,
/// including exact equalities, gets hit.
inline OracleTuple random_tuple(std::mt19937& rng, double ws, double lh) {
  auto around = [&](double centre, int spread) {
    const int c = static_cast<int>(centre);
    std::uniform_int_distribution<int> d(std::max(0, c - spread), c + spread);
    return d(rng);
  };
  OracleTuple t{};
  switch (rng() % 3) {
    case 0: t.LH = around(lh, 4); break;
    case 1: t.LH = around(3 * lh, 4); break;
    default: t.LH = 1 + static_cast<int>(rng() % 120); break;
  }
  t.gaps = rng() % 2 ? 0 : static_cast<int>(rng() % 20);
  t.WS = t.gaps == 0 ? 0 : around(ws, 6);
  if (rng() % 5) t.WS_prev = around(ws, 6);
  if (rng() % 5) t.WS_next = around(ws, 6);
  return t;
}

}  // namespace tablescout::testing
