#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tablescout {

/// Structural table category: A = fully/partially bounded by grid lines,
/// B = delimited by parallel horizontal rules, C = whitespace-aligned only.
enum class Category { A, B, C };

constexpr std::string_view category_name(Category c) {
  switch (c) {
    case Category::A: return "A";
    case Category::B: return "B";
    case Category::C: return "C";
  }
  return "?";
}

inline std::optional<Category> parse_category(std::string_view s) {
  if (s == "A" || s == "a") return Category::A;
  if (s == "B" || s == "b") return Category::B;
  if (s == "C" || s == "c") return Category::C;
  return std::nullopt;
}

constexpr int category_index(Category c) { return static_cast<int>(c); }

}  // namespace tablescout
