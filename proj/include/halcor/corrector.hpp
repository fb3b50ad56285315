#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halcor/annotation.hpp"
#include "halcor/claim_builder.hpp"

namespace halcor {

struct CorrectedResponse {
  std::string text;  // with inline box annotations
  std::vector<Annotation> annotations;
  std::string source;  // the passage before correction

  friend bool operator==(const CorrectedResponse&, const CorrectedResponse&) = default;
};

// Validates a correction completion against the knowledge base: strips a
// leading "Refined passage:" label, rejects malformed annotations and boxes
// that are not in the knowledge base (compared at 3 decimals). Throws ParseError.
CorrectedResponse parse_correction(std::string_view llm_output, std::string_view source,
                                   const VisualKnowledgeBase& kb);

// Advisory check of numbers written next to entity names ("two dogs")
// against the Count section. Returns one message per disagreement.
std::vector<std::string> check_counts(std::string_view corrected_text, const VisualKnowledgeBase& kb);

struct CorrectionResult {
  CorrectedResponse response;
  std::string prompt;
  std::vector<std::string> raw_outputs;
  std::vector<std::string> warnings;
};

class Corrector {
 public:
  Corrector(Gateway& gateway, PromptTemplate tmpl, ChatSettings settings = {});

  // An empty knowledge base leaves the passage unchanged with a "no evidence"
  // warning and no LLM call. A benchmark question, when given, is placed
  // before the supplementary information.
  CorrectionResult correct(std::string_view passage, const VisualKnowledgeBase& kb,
                           const std::optional<std::string>& question = std::nullopt) const;

 private:
  Gateway& gateway_;
  PromptTemplate template_;
  ChatSettings settings_;
};

}  // namespace halcor
