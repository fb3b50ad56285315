#include <gtest/gtest.h>

#include "halcor/yesno.hpp"
#include "support/generators.hpp"

using namespace halcor;

TEST(Polarity, FirstKeywordWins) {
  EXPECT_EQ(extract_polarity("Yes"), Polarity::yes);
  EXPECT_EQ(extract_polarity("yes!"), Polarity::yes);
  EXPECT_EQ(extract_polarity("No, I don't think so. Yes maybe"), Polarity::no);
  EXPECT_EQ(extract_polarity("Nobody knows, yesterday"), Polarity::unknown);
  EXPECT_EQ(extract_polarity(""), Polarity::unknown);
}

TEST(Polarity, StringRoundTrip) {
  for (auto p : {Polarity::yes, Polarity::no, Polarity::unknown}) EXPECT_EQ(polarity_from_string(to_string(p)), p);
  EXPECT_FALSE(polarity_from_string("maybe"));
}

TEST(CoreQuestion, CutsAfterFirstQuestionMark) {
  EXPECT_EQ(core_question("Is there a dog in the picture? Please answer yes or no."), "Is there a dog in the picture?");
  EXPECT_EQ(core_question("  Describe it  "), "Describe it");
}

TEST(ComposeClaim, ExistenceQuestions) {
  EXPECT_EQ(compose_claim("Is there a dog in the image?", "Yes").claim_text, "Yes, there is a dog in the image.");
  EXPECT_EQ(compose_claim("Is there a dog in the image?", "No.").claim_text, "No, there is no dog in the image.");
  EXPECT_EQ(compose_claim("Are there any cats in this image? Please answer yes or no.", "no").claim_text,
            "No, there are no cats in this image.");
  EXPECT_EQ(compose_claim("Are there two dogs in the image?", "No").claim_text,
            "No, there are not two dogs in the image.");
  EXPECT_EQ(compose_claim("Is there an apple?", "No").claim_text, "No, there is no apple.");
  EXPECT_EQ(compose_claim("Is there snow on the ground?", "No").claim_text, "No, there is no snow on the ground.");
}

TEST(ComposeClaim, OtherShapesUseTheFallback) {
  const auto a = compose_claim("Is the dog brown? Answer yes or no.", "yes");
  EXPECT_EQ(a.polarity, Polarity::yes);
  EXPECT_EQ(a.claim_text, "Yes, the answer to the question \"Is the dog brown?\" is yes.");
}

TEST(ComposeClaim, UnknownAnswerHasNoClaim) {
  const auto a = compose_claim("Is there a dog in the image?", "I cannot tell.");
  EXPECT_EQ(a.polarity, Polarity::unknown);
  EXPECT_TRUE(a.claim_text.empty());
}

TEST(QueriedObject, PhraseAndNumber) {
  EXPECT_EQ(queried_object("Is there a dog in the image?")->phrase, "dog");
  EXPECT_EQ(queried_object("Is there a red car in this picture?")->phrase, "red car");
  const auto q = queried_object("Are there a total of three cats in the image?");
  EXPECT_EQ(q->phrase, "cats");
  EXPECT_EQ(q->number, 3u);
  EXPECT_EQ(queried_object("Are there 2 bikes?")->number, 2u);
  EXPECT_FALSE(queried_object("Is the dog brown?"));
  EXPECT_FALSE(queried_object("Is there a?"));
}

namespace {

VisualKnowledgeBase kb_with(std::string entity, std::size_t n) {
  ObjectEvidence ev{std::move(entity), n, std::vector<BoundingBox>(n, BoundingBox{0.1, 0.1, 0.2, 0.2})};
  VisualKnowledgeBase kb;
  kb.count_claims.push_back(count_claim(ev));
  return kb;
}

CorrectedResponse text(std::string t) { return {t, {}, t}; }

}  // namespace

TEST(DecidePolarity, CountClaimDecidesExistence) {
  const auto d = decide_polarity(text("Yes, there is a dog in the image."), kb_with("dog", 0), "Is there a dog in the image?");
  EXPECT_EQ(d.polarity, Polarity::no);
  EXPECT_TRUE(d.from_knowledge_base);
  EXPECT_EQ(decide_polarity(text("No."), kb_with("dog", 2), "Are there dogs in the image?").polarity, Polarity::yes);
  EXPECT_EQ(decide_polarity(text("Yes."), kb_with("dog", 2), "Are there three dogs?").polarity, Polarity::no);
  EXPECT_EQ(decide_polarity(text("No."), kb_with("dog", 2), "Are there two dogs?").polarity, Polarity::yes);
}

TEST(DecidePolarity, KeywordsThenCuesThenDefault) {
  const VisualKnowledgeBase none;
  EXPECT_EQ(decide_polarity(text("Yes, the dog is brown."), none, "Is the dog brown?").polarity, Polarity::yes);
  EXPECT_EQ(decide_polarity(text("The dog is not brown."), none, "Is the dog brown?").polarity, Polarity::no);
  EXPECT_EQ(decide_polarity(text("There is no cat here."), none, "Q?").polarity, Polarity::no);
  EXPECT_EQ(decide_polarity(text("There is a cat([0.1,0.1,0.2,0.2])."), none, "Q?").polarity, Polarity::yes);
  const auto d = decide_polarity(text("A cat."), none, "Q?", Polarity::yes);
  EXPECT_EQ(d.polarity, Polarity::yes);
  EXPECT_TRUE(d.defaulted);
  EXPECT_EQ(decide_polarity(text("A cat."), none, "Q?", Polarity::unknown).polarity, Polarity::no);
}

TEST(DecidePolarity, TotalOnFuzzedKnowledgeBases) {
  gen::Rng rng(99);
  const std::vector<std::string> questions = {
      "Is there a dog in the image?", "Are there two cats in the picture?", "Is the car red?", "Are there any glasses?",
      "Is there a total of 3 red car in this photo?", "", "???", "Is there",
  };
  const std::vector<std::string> answers = {"Yes.", "No", "There is no dog.", "It is not red.", "", "maybe",
                                            "There are 3 cats([0.1,0.1,0.2,0.2])."};
  for (int i = 0; i < 1000; ++i) {
    const auto kb = gen::knowledge_base(rng);
    const auto d = decide_polarity(text(gen::pick(rng, answers) + gen::annotation_noise(rng)), kb,
                                   gen::pick(rng, questions) + (gen::coin(rng) ? "" : gen::pick(rng, gen::nouns())),
                                   gen::coin(rng) ? Polarity::no : Polarity::unknown);
    ASSERT_TRUE(d.polarity == Polarity::yes || d.polarity == Polarity::no);
    ASSERT_FALSE(d.from_knowledge_base && d.defaulted);
  }
}
