#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "halcor/prompt_template.hpp"

namespace halcor::eval {

// Binds the two responses to the Assistant 1 / Assistant 2 slots of the
// pairwise judge template. Both responses must be non-empty (InvalidRequest).
std::string build_judge_prompt(const PromptTemplate& judge_template, std::string_view response_1,
                               std::string_view response_2);

struct JudgeScores {
  std::pair<double, double> accuracy;
  std::pair<double, double> detailedness;
  std::string reasons;  // "Accuracy: ...\nDetailedness: ..."

  friend bool operator==(const JudgeScores&, const JudgeScores&) = default;
};

// Reads the "Accuracy:" and "Detailedness:" sections in any order. Each must
// carry two scores in [1, 10], after "Scores of the two answers:" or on the
// first line holding exactly two numbers. Throws ParseError keeping the raw text.
JudgeScores parse_judge_scores(std::string_view judge_output);

}  // namespace halcor::eval
