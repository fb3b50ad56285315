#include "halcor/eval/metrics.hpp"

#include <array>

#include <fmt/format.h>

#include "halcor/errors.hpp"

namespace halcor::eval {

namespace {

constexpr std::array<std::string_view, 7> kSubsetNames = {"existence", "count",   "position",   "color",
                                                          "random",    "popular", "adversarial"};

double ratio(std::size_t num, std::size_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void require_yes_no(Polarity p, const EvalRecord& r) {
  if (p == Polarity::unknown)
    throw SchemaError(fmt::format("record for '{}' / '{}' has an unknown polarity", r.image_ref, r.question));
}

}  // namespace

std::string_view to_string(Subset s) noexcept { return kSubsetNames[static_cast<std::size_t>(s)]; }

std::optional<Subset> subset_from_string(std::string_view s) noexcept {
  for (std::size_t i = 0; i < kSubsetNames.size(); ++i)
    if (kSubsetNames[i] == s) return static_cast<Subset>(i);
  return std::nullopt;
}

Polarity scored_polarity(const EvalRecord& r, Scored which) {
  if (which == Scored::raw) {
    require_yes_no(r.raw_polarity, r);
    return r.raw_polarity;
  }
  if (!r.corrected_polarity)
    throw SchemaError(fmt::format("record for '{}' / '{}' has no corrected answer", r.image_ref, r.question));
  require_yes_no(*r.corrected_polarity, r);
  return *r.corrected_polarity;
}

Confusion confusion(const std::vector<EvalRecord>& records, Scored which) {
  Confusion c;
  for (const auto& r : records) {
    require_yes_no(r.gold, r);
    const bool said_yes = scored_polarity(r, which) == Polarity::yes;
    const bool is_yes = r.gold == Polarity::yes;
    if (said_yes && is_yes) ++c.tp;
    else if (said_yes) ++c.fp;
    else if (is_yes) ++c.fn;
    else ++c.tn;
  }
  return c;
}

PopeMetrics pope_metrics(const Confusion& c) {
  const auto n = c.total();
  if (n == 0) throw EmptyDataset();
  PopeMetrics m;
  m.accuracy = ratio(c.tp + c.tn, n);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.yes_rate = ratio(c.tp + c.fp, n);
  return m;
}

PopeMetrics pope_metrics(const std::vector<EvalRecord>& records, Scored which) {
  if (records.empty()) throw EmptyDataset();
  return pope_metrics(confusion(records, which));
}

MmeScore mme_score(const std::vector<EvalRecord>& records, Scored which) {
  if (records.empty()) throw EmptyDataset();
  // image -> (questions, correct)
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_image;
  std::size_t correct = 0;
  for (const auto& r : records) {
    require_yes_no(r.gold, r);
    auto& slot = per_image[r.image_ref];
    ++slot.first;
    if (scored_polarity(r, which) == r.gold) {
      ++slot.second;
      ++correct;
    }
  }
  std::size_t both = 0;
  for (const auto& [image, tally] : per_image) {
    if (tally.first != 2)
      throw MalformedGrouping(fmt::format("image '{}' has {} questions, expected 2", image, tally.first));
    if (tally.second == 2) ++both;
  }
  MmeScore s;
  s.images = per_image.size();
  s.accuracy = ratio(correct, records.size());
  s.accuracy_plus = ratio(both, per_image.size());
  s.score = 100.0 * s.accuracy + 100.0 * s.accuracy_plus;
  return s;
}

MmeReport mme_report(const std::vector<EvalRecord>& records, Scored which) {
  if (records.empty()) throw EmptyDataset();
  std::map<std::string, std::vector<EvalRecord>> groups;
  for (const auto& r : records) groups[r.subset ? std::string(to_string(*r.subset)) : "unlabeled"].push_back(r);
  MmeReport report;
  for (const auto& [name, rs] : groups) {
    const auto s = mme_score(rs, which);
    report.by_subset.emplace(name, s);
    report.total += s.score;
  }
  return report;
}

double CorrectionBreakdown::accuracy() const noexcept { return ratio(kept_correct + fixed, problems); }
double CorrectionBreakdown::omission() const noexcept { return ratio(still_wrong, problems); }
double CorrectionBreakdown::miscorrection() const noexcept { return ratio(broken, problems); }

CorrectionBreakdown correction_breakdown(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw EmptyDataset();
  CorrectionBreakdown b;
  for (const auto& r : records) {
    require_yes_no(r.gold, r);
    const bool before = scored_polarity(r, Scored::raw) == r.gold;
    const bool after = scored_polarity(r, Scored::corrected) == r.gold;
    if (before && after) ++b.kept_correct;
    else if (after) ++b.fixed;
    else if (before) ++b.broken;
    else ++b.still_wrong;
  }
  b.problems = records.size();
  return b;
}

}  // namespace halcor::eval
