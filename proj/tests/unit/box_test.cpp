#include <gtest/gtest.h>

#include "halcor/box.hpp"
#include "support/generators.hpp"

using halcor::BoundingBox;

TEST(Box, IouOfHalfOverlap) { EXPECT_DOUBLE_EQ(halcor::iou({0, 0, 1, 1}, {0, 0, 0.5, 1}), 0.5); }

TEST(Box, IouOfDisjointAndTouchingBoxesIsZero) {
  EXPECT_EQ(halcor::iou({0, 0, 0.2, 0.2}, {0.5, 0.5, 0.7, 0.7}), 0.0);
  EXPECT_EQ(halcor::iou({0, 0, 0.5, 1}, {0.5, 0, 1, 1}), 0.0);
}

TEST(Box, IouProperties) {
  gen::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto a = gen::box(rng), b = gen::box(rng);
    const double v = halcor::iou(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_DOUBLE_EQ(v, halcor::iou(b, a));
    EXPECT_DOUBLE_EQ(halcor::iou(a, a), 1.0);
  }
}

TEST(Box, Validity) {
  EXPECT_TRUE((BoundingBox{0, 0, 1, 1}.valid()));
  EXPECT_FALSE((BoundingBox{0.5, 0, 0.5, 1}.valid()));
  EXPECT_FALSE((BoundingBox{0, 0, 1.01, 1}.valid()));
  EXPECT_FALSE((BoundingBox{-0.01, 0, 1, 1}.valid()));
  EXPECT_FALSE((BoundingBox{0, 0.7, 1, 0.2}.valid()));
}

TEST(Box, FormatUsesThreeDecimals) {
  EXPECT_EQ(halcor::format_box({0.1, 0.2, 0.3, 0.4}), "[0.100,0.200,0.300,0.400]");
  EXPECT_EQ(halcor::format_box({0.0004, 0.31249, 0.9996, 1}), "[0.000,0.312,1.000,1.000]");
}

TEST(Box, SameAt3dpMatchesPrintedForm) {
  gen::Rng rng(5);
  std::uniform_real_distribution<double> jitter(-0.0004, 0.0004);
  for (int i = 0; i < 1000; ++i) {
    const auto a = gen::box(rng);
    BoundingBox b{a.x1 + jitter(rng), a.y1 + jitter(rng), a.x2 + jitter(rng), a.y2 + jitter(rng)};
    EXPECT_EQ(halcor::same_at_3dp(a, b), halcor::format_box(a) == halcor::format_box(b));
  }
}
