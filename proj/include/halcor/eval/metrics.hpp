#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halcor/yesno.hpp"

namespace halcor::eval {

enum class Subset { existence, count, position, color, random, popular, adversarial };

std::string_view to_string(Subset s) noexcept;
std::optional<Subset> subset_from_string(std::string_view s) noexcept;

// One benchmark question. Polarities are yes or no, never unknown.
struct EvalRecord {
  std::string image_ref;
  std::string question;
  std::string answer;  // raw response text, kept for correction runs
  Polarity gold = Polarity::no;
  Polarity raw_polarity = Polarity::no;
  std::optional<Polarity> corrected_polarity;
  std::optional<Subset> subset;

  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

// Which answer of a record is scored.
enum class Scored { raw, corrected };

// Throws SchemaError when `which` is corrected and the record has no corrected answer.
Polarity scored_polarity(const EvalRecord& r, Scored which);

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

Confusion confusion(const std::vector<EvalRecord>& records, Scored which = Scored::raw);

struct PopeMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double yes_rate = 0.0;

  friend bool operator==(const PopeMetrics&, const PopeMetrics&) = default;
};

// "yes" is the positive class. Precision is 0 when nothing was answered yes,
// recall is 0 when nothing is gold yes, f1 is 0 when P + R = 0.
PopeMetrics pope_metrics(const Confusion& c);
PopeMetrics pope_metrics(const std::vector<EvalRecord>& records, Scored which = Scored::raw);

struct MmeScore {
  double accuracy = 0.0;
  double accuracy_plus = 0.0;  // fraction of images with both questions right
  double score = 0.0;          // 100 * (accuracy + accuracy_plus)
  std::size_t images = 0;

  friend bool operator==(const MmeScore&, const MmeScore&) = default;
};

// Groups by image_ref; every image must have exactly two records.
MmeScore mme_score(const std::vector<EvalRecord>& records, Scored which = Scored::raw);

struct MmeReport {
  std::map<std::string, MmeScore> by_subset;  // subset name, or "unlabeled"
  double total = 0.0;                         // sum of subset scores
};

// Splits by subset label first, so one image may appear in several subsets.
MmeReport mme_report(const std::vector<EvalRecord>& records, Scored which = Scored::raw);

struct CorrectionBreakdown {
  std::size_t kept_correct = 0;  // right before, right after
  std::size_t fixed = 0;         // wrong before, right after
  std::size_t still_wrong = 0;   // omission
  std::size_t broken = 0;        // miscorrection
  std::size_t problems = 0;

  double accuracy() const noexcept;
  double omission() const noexcept;
  double miscorrection() const noexcept;

  friend bool operator==(const CorrectionBreakdown&, const CorrectionBreakdown&) = default;
};

// Every record needs a corrected polarity (SchemaError otherwise).
CorrectionBreakdown correction_breakdown(const std::vector<EvalRecord>& records);

}  // namespace halcor::eval
