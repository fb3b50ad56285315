#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "halcor/concept_extractor.hpp"

namespace halcor {

enum class QuestionLevel { object, attribute };

// Position questions ("where", "left", "right", "next to") are routed to the
// Overall section of the knowledge base.
enum class AttributeKind { general, position };

struct Question {
  std::string text;
  QuestionLevel level = QuestionLevel::object;
  AttributeKind kind = AttributeKind::general;
  std::vector<std::string> entities;

  friend bool operator==(const Question&, const Question&) = default;
};

inline constexpr std::size_t kDefaultMaxAttributeQuestions = 8;

// "Is there any {object} in the image? How many are there?" per entity.
std::vector<Question> object_questions(const std::vector<Entity>& entities);

AttributeKind classify_attribute_question(std::string_view question);

struct AttributeParse {
  std::vector<Question> questions;
  std::vector<std::string> dropped;  // "<line> :: <reason>"
};

// Parses "question&entity. entity" lines. Lines that break the line format
// or the prohibitions (counts, existence, unknown entities, no '?') are
// dropped. Throws ParseError when the output has text but not a single line
// in the line format.
AttributeParse parse_attribute_questions(std::string_view llm_output,
                                         const std::vector<Entity>& entities,
                                         std::size_t max_questions = kDefaultMaxAttributeQuestions);

struct AttributeQuestionResult {
  std::vector<Question> questions;
  std::vector<std::string> dropped;
  std::vector<std::string> raw_outputs;
};

class QuestionFormulator {
 public:
  QuestionFormulator(Gateway& gateway, PromptTemplate tmpl, ChatSettings settings = {},
                     std::size_t max_attribute_questions = kDefaultMaxAttributeQuestions);

  AttributeQuestionResult attribute_questions(std::string_view response_text,
                                              const std::vector<Entity>& entities) const;

 private:
  Gateway& gateway_;
  PromptTemplate template_;
  ChatSettings settings_;
  std::size_t max_questions_;
};

}  // namespace halcor
