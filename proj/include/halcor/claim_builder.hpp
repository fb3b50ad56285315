#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halcor/visual_validator.hpp"

namespace halcor {

enum class ClaimKind { count, specific, overall };

struct Claim {
  std::string text;
  ClaimKind kind = ClaimKind::count;
  std::optional<std::string> entity;
  std::vector<BoundingBox> boxes;

  friend bool operator==(const Claim&, const Claim&) = default;
};

// "There are {count} {name}." or "There is no {name}.", verbatim: no
// pluralization and no article changes.
Claim count_claim(const ObjectEvidence& evidence);

// Specific for a single entity; Overall for position questions or when two
// or more entities are involved.
ClaimKind claim_kind_for(const Question& question);

// Fixed question shapes ("What color is the X?", "What is the X doing?",
// "Where is the X?", "Is the X ...?") merged by rule. nullopt when no rule fits.
std::optional<std::string> rule_based_claim(const QAPair& qa);

// Parses the QA-to-claim completion: a single line ending in '.' or '!'.
std::string parse_claim_line(std::string_view llm_output);

// One instance of an entity in the Specific section, with the attribute
// claims attached to it.
struct InstanceClaims {
  std::string entity;
  std::size_t index = 1;  // 1-based, dense per entity
  BoundingBox box;
  std::vector<std::string> claims;

  friend bool operator==(const InstanceClaims&, const InstanceClaims&) = default;
};

struct VisualKnowledgeBase {
  std::vector<Claim> count_claims;
  std::vector<InstanceClaims> specific_claims;
  std::vector<Claim> overall_claims;

  bool empty() const noexcept {
    return count_claims.empty() && specific_claims.empty() && overall_claims.empty();
  }
  // Count recorded for `entity`, if the knowledge base has a count claim for it.
  std::optional<std::size_t> count_of(std::string_view entity) const;
  // Every box listed in the Specific section.
  std::vector<BoundingBox> all_boxes() const;

  friend bool operator==(const VisualKnowledgeBase&, const VisualKnowledgeBase&) = default;
};

// Attribute claims of an entity are attached to every instance of that entity,
// since the VQA answer is per entity rather than per box.
VisualKnowledgeBase build_knowledge_base(const std::vector<ObjectEvidence>& evidence,
                                         const std::vector<Claim>& attribute_claims);

// Count / Specific / Overall sections, empty ones omitted. Specific lines read
// "{entity} {i}: [x1,y1,x2,y2]" plus that instance's claims; 3 decimals.
std::string serialize_kb(const VisualKnowledgeBase& kb);

enum class ClaimMode {
  llm,     // always the merge prompt
  rule,    // rules, then a literal "question: answer" fallback; never calls the LLM
  hybrid,  // rules first, merge prompt for the remaining shapes
};

struct ClaimResult {
  Claim claim;
  bool from_rule = false;
  std::vector<std::string> raw_outputs;
};

class ClaimGenerator {
 public:
  ClaimGenerator(Gateway& gateway, PromptTemplate tmpl, ClaimMode mode = ClaimMode::hybrid,
                 ChatSettings settings = {});

  ClaimResult qa_to_claim(const QAPair& qa) const;

 private:
  Gateway& gateway_;
  PromptTemplate template_;
  ClaimMode mode_;
  ChatSettings settings_;
};

}  // namespace halcor
