#include "halcor/question_formulator.hpp"

#include <algorithm>
#include <set>

#include "halcor/errors.hpp"
#include "text_util.hpp"

namespace halcor {

std::vector<Question> object_questions(const std::vector<Entity>& entities) {
  std::vector<Question> out;
  out.reserve(entities.size());
  for (const auto& e : entities) {
    out.push_back({"Is there any " + e.name + " in the image? How many are there?", QuestionLevel::object,
                   AttributeKind::general, {e.name}});
  }
  return out;
}

AttributeKind classify_attribute_question(std::string_view question) {
  for (std::string_view kw : {"where", "left", "right", "next to"}) {
    if (text::contains_word_ci(question, kw)) return AttributeKind::position;
  }
  return AttributeKind::general;
}

AttributeParse parse_attribute_questions(std::string_view llm_output, const std::vector<Entity>& entities,
                                         std::size_t max_questions) {
  const std::string raw(llm_output);
  AttributeParse result;
  const auto trimmed = text::trim(llm_output);
  if (trimmed.empty()) throw ParseError("question output is empty", raw);
  {
    std::string single = text::to_lower(trimmed);
    while (!single.empty() && single.back() == '.') single.pop_back();
    if (single == "none") return result;
  }

  const auto names = names_of(entities);
  const std::set<std::string> known(names.begin(), names.end());
  std::set<std::string> seen_text;
  std::size_t well_formed = 0;

  for (const auto& line_raw : text::split_lines(trimmed)) {
    const auto line = text::trim(line_raw);
    if (line.empty()) continue;
    auto drop = [&](std::string_view why) {
      result.dropped.push_back(std::string(line) + " :: " + std::string(why));
    };
    const auto amp = line.rfind('&');
    if (amp == std::string_view::npos) {
      drop("no '&' separator");
      continue;
    }
    std::string question(text::trim(line.substr(0, amp)));
    std::vector<std::string> involved;
    for (const auto& piece : text::split(text::to_lower(line.substr(amp + 1)), '.')) {
      std::string name(text::trim(piece));
      if (!name.empty() && std::find(involved.begin(), involved.end(), name) == involved.end())
        involved.push_back(std::move(name));
    }
    if (question.empty() || involved.empty()) {
      drop("empty question or entity field");
      continue;
    }
    ++well_formed;
    if (question.back() != '?') {
      drop("question does not end with '?'");
      continue;
    }
    if (text::contains_ci(question, "how many") || text::contains_ci(question, "is there")) {
      drop("asks about counts or existence");
      continue;
    }
    if (!std::all_of(involved.begin(), involved.end(), [&](const auto& n) { return known.contains(n); })) {
      drop("entity outside the extracted set");
      continue;
    }
    if (!seen_text.insert(question).second) {
      drop("duplicate question");
      continue;
    }
    if (result.questions.size() >= max_questions) {
      drop("over max_attribute_questions");
      continue;
    }
    const auto kind = classify_attribute_question(question);
    result.questions.push_back({std::move(question), QuestionLevel::attribute, kind, std::move(involved)});
  }
  if (well_formed == 0) throw ParseError("no line follows the 'question&entities' format", raw);
  return result;
}

QuestionFormulator::QuestionFormulator(Gateway& gateway, PromptTemplate tmpl, ChatSettings settings,
                                       std::size_t max_attribute_questions)
    : gateway_(gateway),
      template_(std::move(tmpl)),
      settings_(settings),
      max_questions_(max_attribute_questions) {}

AttributeQuestionResult QuestionFormulator::attribute_questions(std::string_view response_text,
                                                                const std::vector<Entity>& entities) const {
  AttributeQuestionResult result;
  if (entities.empty()) return result;
  const auto rendered = render(template_, {{"sentence", std::string(text::trim(response_text))},
                                           {"entities", format_entity_line(entities)}});
  ChatRequest req{rendered.system_message, rendered.prompt, settings_.temperature, settings_.max_tokens};
  auto parsed = chat_with_retry(gateway_, req, result.raw_outputs, [&](std::string_view out) {
    return parse_attribute_questions(out, entities, max_questions_);
  });
  result.questions = std::move(parsed.questions);
  result.dropped = std::move(parsed.dropped);
  return result;
}

}  // namespace halcor
