#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "halcor/visual_validator.hpp"
#include "support/fake_backend.hpp"
#include "support/generators.hpp"

using namespace halcor;

namespace {

std::vector<Detection> random_detections(gen::Rng& rng) {
  std::vector<Detection> out;
  const auto n = gen::uniform(rng, 0, 9);
  // A few anchor boxes with jittered copies, so groups of overlaps occur.
  std::vector<BoundingBox> anchors;
  for (int i = 0; i < 3; ++i) anchors.push_back(gen::box(rng));
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  for (std::size_t i = 0; i < n; ++i) {
    auto b = gen::coin(rng, 0.7) ? gen::pick(rng, anchors) : gen::box(rng);
    BoundingBox j{std::clamp(b.x1 + jitter(rng), 0.0, 1.0), std::clamp(b.y1 + jitter(rng), 0.0, 1.0),
                  std::clamp(b.x2 + jitter(rng), 0.0, 1.0), std::clamp(b.y2 + jitter(rng), 0.0, 1.0)};
    if (!j.valid()) j = b;
    out.push_back({"dog", j, static_cast<double>(gen::uniform(rng, 35, 100)) / 100.0});
  }
  return out;
}

// Oracle: connected components by flood fill over the link relation, each
// represented by its best member.
std::vector<Detection> components(std::vector<Detection> d, std::optional<double> t) {
  std::sort(d.begin(), d.end(), detection_order);
  const auto n = d.size();
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const auto i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (comp[j] >= 0) continue;
        if (same_at_3dp(d[i].box, d[j].box) || (t && iou(d[i].box, d[j].box) > *t)) {
          comp[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }
  std::vector<Detection> out;
  std::vector<bool> seen(static_cast<std::size_t>(next), false);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[static_cast<std::size_t>(comp[i])]) continue;
    seen[static_cast<std::size_t>(comp[i])] = true;
    out.push_back(d[i]);
  }
  return out;
}

}  // namespace

TEST(Suppression, MatchesComponentOracle) {
  gen::Rng rng(17);
  for (int round = 0; round < 500; ++round) {
    const auto d = random_detections(rng);
    for (std::optional<double> t : {std::optional<double>{}, std::optional<double>{0.3}, std::optional<double>{0.9}})
      ASSERT_EQ(suppress_duplicates(d, t), components(d, t));
  }
}

TEST(Suppression, LoweringThresholdNeverAddsBoxes) {
  gen::Rng rng(23);
  for (int round = 0; round < 500; ++round) {
    const auto d = random_detections(rng);
    std::size_t previous = suppress_duplicates(d, std::nullopt).size();
    for (double t : {0.95, 0.9, 0.7, 0.5, 0.3, 0.1, 0.0}) {
      const auto now = suppress_duplicates(d, t).size();
      ASSERT_LE(now, previous);
      previous = now;
    }
  }
}

TEST(Suppression, KeepsBestOfDuplicatePair) {
  const std::vector<Detection> d = {{"bird", {0.1, 0.1, 0.5, 0.5}, 0.6}, {"bird", {0.1, 0.1, 0.51, 0.5}, 0.9},
                                    {"bird", {0.6, 0.6, 0.9, 0.9}, 0.5}};
  const auto kept = suppress_duplicates(d, 0.9);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].score, 0.9);
  EXPECT_EQ(kept[1].score, 0.5);
}

TEST(Validator, CountsPerEntityWithBatchedCall) {
  auto backend = std::make_shared<fake::ScriptedBackend>();
  backend->detections["img"] = {fake::det("dog", 0.1, 0.1, 0.4, 0.4, 0.8), fake::det("dog", 0.6, 0.1, 0.9, 0.4, 0.7),
                                fake::det("dog", 0.1, 0.1, 0.4, 0.4, 0.5), fake::det("cat", 0.2, 0.2, 0.3, 0.3, 0.2)};
  Gateway gw(BackendConfig{}, backend);
  VisualValidator v(gw);
  const auto ev = v.validate_objects("img", {{"dog"}, {"cat"}});
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].count, 2u);
  EXPECT_EQ(ev[0].boxes.size(), 2u);
  EXPECT_EQ(ev[1].count, 0u);
  EXPECT_EQ(backend->count(BackendKind::detect), 1u);
}

TEST(Validator, UnbatchedMakesOneCallPerEntity) {
  auto backend = std::make_shared<fake::ScriptedBackend>();
  backend->detections["img"] = nlohmann::json::array();
  Gateway gw(BackendConfig{}, backend);
  ValidatorOptions o;
  o.batch_phrases = false;
  VisualValidator v(gw, o);
  v.validate_objects("img", {{"dog"}, {"cat"}, {"car"}});
  EXPECT_EQ(backend->count(BackendKind::detect), 3u);
}

TEST(Validator, AttributeQuestionsSkipAbsentEntitiesAndKeepOrder) {
  auto backend = std::make_shared<fake::ScriptedBackend>();
  backend->answers[{"img", "What color is the dog?"}] = "brown";
  backend->answers[{"img", "Is the dog next to the cat?"}] = " yes ";
  backend->answers[{"img", "What is the dog doing?"}] = "";
  Gateway gw(BackendConfig{}, backend);
  VisualValidator v(gw);
  const std::vector<ObjectEvidence> ev = {{"dog", 1, {{0.1, 0.1, 0.4, 0.4}}}, {"cat", 0, {}}};
  const std::vector<Question> qs = {
      {"What color is the dog?", QuestionLevel::attribute, AttributeKind::general, {"dog"}},
      {"What color is the cat?", QuestionLevel::attribute, AttributeKind::general, {"cat"}},
      {"Is the dog next to the cat?", QuestionLevel::attribute, AttributeKind::position, {"dog", "cat"}},
      {"What is the dog doing?", QuestionLevel::attribute, AttributeKind::general, {"dog"}},
  };
  const auto r = v.validate_attributes("img", qs, ev);
  ASSERT_EQ(r.pairs.size(), 2u);
  EXPECT_EQ(r.pairs[0].answer, "brown");
  EXPECT_EQ(r.pairs[1].answer, "yes");
  EXPECT_EQ(r.pairs[1].evidence_boxes.size(), 1u);
  ASSERT_EQ(r.skipped.size(), 2u);
  EXPECT_EQ(r.skipped[0].question.text, "What color is the cat?");
  EXPECT_EQ(backend->count(BackendKind::vqa), 3u);
}
