#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "halcor/corrector.hpp"

namespace halcor {

enum class Polarity { yes, no, unknown };

std::string_view to_string(Polarity p) noexcept;
std::optional<Polarity> polarity_from_string(std::string_view s) noexcept;

struct PolarAnswer {
  Polarity polarity = Polarity::unknown;
  std::string claim_text;  // empty iff polarity is unknown

  friend bool operator==(const PolarAnswer&, const PolarAnswer&) = default;
};

// First standalone "yes" or "no" token, case-insensitive.
Polarity extract_polarity(std::string_view answer);

// The part of a benchmark question up to and including its first '?'
// ("... in the picture? Please answer yes or no." keeps only the question).
std::string core_question(std::string_view question);

// "Is there a dog in the image?" -> "there is a dog in the image" (yes) or
// "there is no dog in the image" (no). nullopt for shapes outside the rule set.
std::optional<std::string> declarativize(std::string_view question, Polarity polarity);

// Keyword polarity plus a claim composed from question and answer:
// ("Is there a dog in the image?", "Yes") -> "Yes, there is a dog in the image."
PolarAnswer compose_claim(std::string_view question, std::string_view raw_answer);

// The entity a yes/no question asks about, and the count it states if any.
struct QueriedObject {
  std::string phrase;                 // words after the determiner, e.g. "dog", "red car"
  std::optional<std::size_t> number;  // "Are there two dogs ...?" -> 2
};
std::optional<QueriedObject> queried_object(std::string_view question);

struct PolarityDecision {
  Polarity polarity = Polarity::no;  // always yes or no
  bool from_knowledge_base = false;
  bool defaulted = false;  // neither the knowledge base nor keywords decided

  friend bool operator==(const PolarityDecision&, const PolarityDecision&) = default;
};

// Final yes/no after correction. Existence and count questions about an
// entity with a count claim are decided by that claim (count >= 1, or
// count == stated number). Otherwise the corrected text is scanned for a
// yes/no keyword, then for negation cues; if still undecided the result is
// `unknown_default` with `defaulted` set.
PolarityDecision decide_polarity(const CorrectedResponse& corrected, const VisualKnowledgeBase& kb,
                                 std::string_view question, Polarity unknown_default = Polarity::no);

}  // namespace halcor
