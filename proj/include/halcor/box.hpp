#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

namespace halcor {

// Normalized [x1, y1, x2, y2] rectangle; (x1, y1) is the top-left corner.
struct BoundingBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  // 0 <= x1 < x2 <= 1 and 0 <= y1 < y2 <= 1.
  bool valid() const noexcept;
  double area() const noexcept;

  friend auto operator<=>(const BoundingBox&, const BoundingBox&) = default;
};

double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

// Coordinates quantized to thousandths. Two boxes that print identically
// share the same key.
std::array<std::int64_t, 4> milli_key(const BoundingBox& box) noexcept;
bool same_at_3dp(const BoundingBox& a, const BoundingBox& b) noexcept;

// "[0.100,0.200,0.300,0.400]"
std::string format_box(const BoundingBox& box);

}  // namespace halcor
