#include <gtest/gtest.h>

#include "halcor/annotation.hpp"
#include "support/annotation_corpus.hpp"
#include "support/generators.hpp"

using namespace halcor;

TEST(AnnotationCorpus, HasFiftyCases) { EXPECT_EQ(corpus::annotation_cases().size(), 50u); }

TEST(AnnotationCorpus, NoFalseAcceptsOrRejects) {
  for (const auto& c : corpus::annotation_cases()) {
    SCOPED_TRACE(c.text);
    const auto scan = parse_annotations(c.text);
    ASSERT_EQ(scan.annotations.size(), c.accepted.size());
    EXPECT_EQ(scan.diagnostics.size(), c.diagnostics);
    for (std::size_t i = 0; i < c.accepted.size(); ++i) {
      EXPECT_EQ(scan.annotations[i].entity, c.accepted[i].entity);
      ASSERT_EQ(scan.annotations[i].boxes.size(), c.accepted[i].boxes.size());
      for (std::size_t k = 0; k < c.accepted[i].boxes.size(); ++k)
        EXPECT_TRUE(same_at_3dp(scan.annotations[i].boxes[k], c.accepted[i].boxes[k]));
    }
  }
}

TEST(Annotation, OffsetPointsAtParenthesis) {
  const std::string text = "A dog ([0.1,0.2,0.3,0.4]) sits.";
  const auto scan = parse_annotations(text);
  ASSERT_EQ(scan.annotations.size(), 1u);
  EXPECT_EQ(text[scan.annotations[0].offset], '(');
  EXPECT_EQ(scan.annotations[0].offset, 6u);
}

TEST(Annotation, DiagnosticsCarryAReason) {
  const auto scan = parse_annotations("dog([0.3,0.2,0.1,0.4])");
  ASSERT_EQ(scan.diagnostics.size(), 1u);
  EXPECT_EQ(scan.diagnostics[0].offset, 3u);
  EXPECT_EQ(scan.diagnostics[0].message, "x1 >= x2");
}

TEST(Strip, RemovesAnnotationsAndTheirLeadingSpace) {
  EXPECT_EQ(strip_annotations("The dog ([0.1,0.2,0.3,0.4]) sits on a mat([0.5,0.6,0.7,0.8])."),
            "The dog sits on a mat.");
}

TEST(Strip, KeepsMalformedCandidates) {
  EXPECT_EQ(strip_annotations("dog([0.3,0.2,0.1,0.4]) ok"), "dog([0.3,0.2,0.1,0.4]) ok");
}

TEST(Strip, RepeatsUntilNothingIsLeft) {
  // Removing the inner annotation exposes an outer one.
  const std::string text = "cat([0.1,0.2,0.3,0.4]dog([0.5,0.6,0.7,0.8]))";
  const auto once = strip_annotations(text);
  EXPECT_TRUE(parse_annotations(once).annotations.empty());
}

TEST(Strip, TextWithoutAnnotationsIsUnchanged) {
  for (const auto& c : corpus::annotation_cases()) {
    if (c.accepted.empty()) EXPECT_EQ(strip_annotations(c.text), c.text) << c.text;
  }
}

TEST(AnnotationFuzz, StripAndParseInvariants) {
  gen::Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const auto text = gen::annotation_noise(rng);
    SCOPED_TRACE(text);
    const auto stripped = strip_annotations(text);
    ASSERT_EQ(strip_annotations(stripped), stripped);
    ASSERT_TRUE(parse_annotations(stripped).annotations.empty());
    ASSERT_LE(stripped.size(), text.size());
    const auto scan = parse_annotations(text);
    for (const auto& a : scan.annotations) {
      ASSERT_FALSE(a.entity.empty());
      ASSERT_FALSE(a.boxes.empty());
      ASSERT_EQ(text[a.offset], '(');
      for (const auto& b : a.boxes) ASSERT_TRUE(b.valid());
    }
    if (scan.annotations.empty()) ASSERT_EQ(stripped, text);
  }
}
