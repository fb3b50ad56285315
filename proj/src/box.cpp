#include "halcor/box.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace halcor {

bool BoundingBox::valid() const noexcept {
  auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  return in_unit(x1) && in_unit(y1) && in_unit(x2) && in_unit(y2) && x1 < x2 && y1 < y2;
}

double BoundingBox::area() const noexcept {
  return std::max(0.0, x2 - x1) * std::max(0.0, y2 - y1);
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double iw = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double ih = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::array<std::int64_t, 4> milli_key(const BoundingBox& box) noexcept {
  auto q = [](double v) { return static_cast<std::int64_t>(std::llround(v * 1000.0)); };
  return {q(box.x1), q(box.y1), q(box.x2), q(box.y2)};
}

bool same_at_3dp(const BoundingBox& a, const BoundingBox& b) noexcept {
  return milli_key(a) == milli_key(b);
}

std::string format_box(const BoundingBox& box) {
  // Printed from the quantized key so that text and matching never disagree.
  auto part = [](std::int64_t m) {
    const char* sign = m < 0 ? "-" : "";
    const auto a = m < 0 ? -m : m;
    return fmt::format("{}{}.{:03d}", sign, a / 1000, a % 1000);
  };
  const auto k = milli_key(box);
  return fmt::format("[{},{},{},{}]", part(k[0]), part(k[1]), part(k[2]), part(k[3]));
}

}  // namespace halcor
