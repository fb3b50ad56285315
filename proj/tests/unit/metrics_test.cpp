#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "halcor/errors.hpp"
#include "halcor/eval/metrics.hpp"
#include "halcor/eval/records.hpp"
#include "support/generators.hpp"

using namespace halcor;
using namespace halcor::eval;

namespace {

std::string fixture(const char* name) { return std::string(HALCOR_FIXTURES_DIR) + "/eval/" + name; }

// Straight from the definitions, counting with separate passes.
PopeMetrics brute_force(const std::vector<EvalRecord>& rs, Scored which) {
  auto said = [&](const EvalRecord& r) {
    return which == Scored::raw ? r.raw_polarity : *r.corrected_polarity;
  };
  double n = 0, right = 0, said_yes = 0, gold_yes = 0, both_yes = 0;
  for (const auto& r : rs) {
    n += 1;
    if (said(r) == r.gold) right += 1;
    if (said(r) == Polarity::yes) said_yes += 1;
    if (r.gold == Polarity::yes) gold_yes += 1;
    if (said(r) == Polarity::yes && r.gold == Polarity::yes) both_yes += 1;
  }
  PopeMetrics m;
  m.accuracy = right / n;
  m.precision = said_yes == 0 ? 0.0 : both_yes / said_yes;
  m.recall = gold_yes == 0 ? 0.0 : both_yes / gold_yes;
  m.f1 = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.yes_rate = said_yes / n;
  return m;
}

}  // namespace

TEST(Pope, KnownConfusion) {
  const auto m = pope_metrics(Confusion{52, 38, 98, 112});
  EXPECT_NEAR(100 * m.accuracy, 54.67, 0.005);
  EXPECT_NEAR(100 * m.precision, 57.78, 0.005);
  EXPECT_NEAR(100 * m.recall, 34.67, 0.005);
  EXPECT_NEAR(100 * m.f1, 43.33, 0.005);
  EXPECT_NEAR(100 * m.yes_rate, 30.00, 0.005);
}

TEST(Pope, FixtureReproducesConfusion) {
  const auto set = read_records(std::filesystem::path(fixture("pope_confusion_300.jsonl")));
  EXPECT_EQ(confusion(set.records), (Confusion{52, 38, 98, 112}));
}

// Independent check that the reported percentages pin down a single confusion
// matrix at n = 300: search every split and keep those that round to the row.
TEST(Pope, RowInvertsToUniqueConfusion) {
  const double row[5] = {54.67, 57.78, 34.67, 43.33, 30.00};
  std::vector<Confusion> hits;
  for (std::size_t tp = 0; tp <= 300; ++tp)
    for (std::size_t fp = 0; tp + fp <= 300; ++fp)
      for (std::size_t fn = 0; tp + fp + fn <= 300; ++fn) {
        const Confusion c{tp, fp, fn, 300 - tp - fp - fn};
        const auto m = pope_metrics(c);
        const double got[5] = {m.accuracy, m.precision, m.recall, m.f1, m.yes_rate};
        bool ok = true;
        for (int i = 0; i < 5 && ok; ++i) ok = std::abs(std::round(got[i] * 10000) / 100 - row[i]) < 1e-9;
        if (ok) hits.push_back(c);
      }
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0], (Confusion{52, 38, 98, 112}));
}

TEST(Pope, DegenerateSets) {
  const auto none_said_yes = pope_metrics(Confusion{0, 0, 10, 10});
  EXPECT_EQ(none_said_yes.precision, 0.0);
  EXPECT_EQ(none_said_yes.f1, 0.0);
  EXPECT_EQ(none_said_yes.yes_rate, 0.0);
  EXPECT_THROW(pope_metrics(Confusion{}), EmptyDataset);
  EXPECT_THROW(pope_metrics(std::vector<EvalRecord>{}), EmptyDataset);
}

TEST(Pope, MatchesBruteForceOnRandomSets) {
  gen::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto rs = gen::records(rng, gen::uniform(rng, 1, 1000));
    for (auto which : {Scored::raw, Scored::corrected}) ASSERT_EQ(pope_metrics(rs, which), brute_force(rs, which));
  }
}

TEST(Mme, RangeAndAccPlusBound) {
  gen::Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto rs = gen::records(rng, 2 * gen::uniform(rng, 1, 500));
    const auto s = mme_score(rs);
    ASSERT_GE(s.score, 0.0);
    ASSERT_LE(s.score, 200.0);
    ASSERT_LE(s.accuracy_plus, s.accuracy);
    ASSERT_EQ(s.images, rs.size() / 2);
  }
}

TEST(Mme, Fixtures) {
  const auto mixed = read_records(std::filesystem::path(fixture("mme_135.jsonl")));
  const auto s = mme_score(mixed.records);
  EXPECT_NEAR(s.score, 135.0, 1e-9);
  EXPECT_NEAR(s.accuracy, 0.75, 1e-12);
  EXPECT_NEAR(s.accuracy_plus, 0.6, 1e-12);
  const auto perfect = read_records(std::filesystem::path(fixture("mme_all_correct.jsonl")));
  EXPECT_DOUBLE_EQ(mme_score(perfect.records).score, 200.0);
}

TEST(Mme, HalfRightOnEveryImageScoresFifty) {
  std::vector<EvalRecord> rs;
  for (int i = 0; i < 10; ++i) {
    rs.push_back({"img" + std::to_string(i), "a", "", Polarity::yes, Polarity::yes, {}, {}});
    rs.push_back({"img" + std::to_string(i), "b", "", Polarity::no, Polarity::yes, {}, {}});
  }
  EXPECT_DOUBLE_EQ(mme_score(rs).score, 50.0);
}

TEST(Mme, ImagesNeedExactlyTwoQuestions) {
  std::vector<EvalRecord> rs = {{"a", "q1", "", Polarity::yes, Polarity::yes, {}, {}},
                                {"a", "q2", "", Polarity::yes, Polarity::yes, {}, {}},
                                {"b", "q3", "", Polarity::yes, Polarity::yes, {}, {}}};
  EXPECT_THROW(mme_score(rs), MalformedGrouping);
}

TEST(Mme, ReportSumsSubsets) {
  std::vector<EvalRecord> rs;
  for (auto subset : {Subset::existence, Subset::count}) {
    rs.push_back({"img", "a", "", Polarity::yes, Polarity::yes, {}, subset});
    rs.push_back({"img", "b", "", Polarity::no, subset == Subset::count ? Polarity::yes : Polarity::no, {}, subset});
  }
  const auto r = mme_report(rs);
  ASSERT_EQ(r.by_subset.size(), 2u);
  EXPECT_DOUBLE_EQ(r.by_subset.at("existence").score, 200.0);
  EXPECT_DOUBLE_EQ(r.by_subset.at("count").score, 50.0);
  EXPECT_DOUBLE_EQ(r.total, 250.0);
}

TEST(Breakdown, Fixture) {
  const auto set = read_records(std::filesystem::path(fixture("breakdown_10.jsonl")));
  const auto b = correction_breakdown(set.records);
  EXPECT_EQ(b.kept_correct, 7u);
  EXPECT_EQ(b.fixed, 1u);
  EXPECT_EQ(b.still_wrong, 1u);
  EXPECT_EQ(b.broken, 1u);
  EXPECT_DOUBLE_EQ(b.accuracy(), 0.8);
  EXPECT_DOUBLE_EQ(b.omission(), 0.1);
  EXPECT_DOUBLE_EQ(b.miscorrection(), 0.1);
}

TEST(Breakdown, PartitionsEveryRecord) {
  gen::Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto rs = gen::records(rng, gen::uniform(rng, 1, 1000));
    const auto b = correction_breakdown(rs);
    ASSERT_EQ(b.kept_correct + b.fixed + b.still_wrong + b.broken, b.problems);
    ASSERT_EQ(b.problems, rs.size());
    ASSERT_NEAR(b.accuracy() + b.omission() + b.miscorrection(), 1.0, 1e-12);
  }
}

TEST(Breakdown, NeedsCorrectedAnswers) {
  std::vector<EvalRecord> rs = {{"a", "q", "", Polarity::yes, Polarity::yes, {}, {}}};
  EXPECT_THROW(correction_breakdown(rs), SchemaError);
}

TEST(Subset, NamesRoundTrip) {
  for (auto s : {Subset::existence, Subset::count, Subset::position, Subset::color, Subset::random, Subset::popular,
                 Subset::adversarial})
    EXPECT_EQ(subset_from_string(to_string(s)), s);
  EXPECT_FALSE(subset_from_string("other"));
}

TEST(Records, ReduceAnswersAndCountUnknowns) {
  std::istringstream in(
      R"({"image_ref":"a","question":"Is there a dog?","gold":"yes","answer":"Yes, there is."})"
      "\n\n"
      R"({"image_ref":"a","question":"Is there a cat?","gold":"no","answer":"Hard to say","corrected":"No","subset":"random"})"
      "\n");
  const auto set = read_records(in, Polarity::yes);
  ASSERT_EQ(set.records.size(), 2u);
  EXPECT_EQ(set.unknown_answers, 1u);
  EXPECT_EQ(set.records[0].raw_polarity, Polarity::yes);
  EXPECT_EQ(set.records[1].raw_polarity, Polarity::yes);
  EXPECT_EQ(set.records[1].corrected_polarity, Polarity::no);
  EXPECT_EQ(set.records[1].subset, Subset::random);
  EXPECT_EQ(set.records[1].answer, "Hard to say");
}

TEST(Records, ErrorsNameTheLine) {
  std::istringstream in(R"({"image_ref":"a","question":"q","gold":"yes","answer":"yes"})"
                        "\n"
                        R"({"image_ref":"a","question":"q","gold":"maybe","answer":"yes"})"
                        "\n");
  try {
    read_records(in);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 2:", 0), 0u);
  }
  EXPECT_THROW(read_records(std::filesystem::path("/nonexistent/records.jsonl")), IoError);
}

TEST(Records, JsonRoundTrip) {
  EvalRecord r{"img", "Is there a dog?", "Yes", Polarity::yes, Polarity::yes, Polarity::no, Subset::adversarial};
  EXPECT_EQ(record_from_json(record_to_json(r)), r);
}

TEST(Records, TablesShowPercentages) {
  const auto t = pope_table({{"raw", pope_metrics(Confusion{52, 38, 98, 112})}});
  EXPECT_NE(t.find("54.67"), std::string::npos);
  EXPECT_NE(t.find("43.33"), std::string::npos);
  EXPECT_NE(t.find("Yes Rate"), std::string::npos);
}
