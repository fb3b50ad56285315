#include "halcor/concept_extractor.hpp"

#include <algorithm>

#include "halcor/errors.hpp"
#include "text_util.hpp"

namespace halcor {

namespace {

constexpr std::size_t kMaxWordsPerEntity = 4;

bool entity_chars_ok(std::string_view name) {
  return std::all_of(name.begin(), name.end(), [](char c) {
    return text::is_word_char(c) || c == ' ' || c == '-' || c == '\'';
  });
}

}  // namespace

std::vector<std::string> names_of(const std::vector<Entity>& entities) {
  std::vector<std::string> out;
  out.reserve(entities.size());
  for (const auto& e : entities) out.push_back(e.name);
  return out;
}

std::vector<Entity> parse_entity_line(std::string_view llm_output) {
  const std::string raw(llm_output);
  std::vector<std::string> lines;
  for (auto& l : text::split_lines(llm_output)) {
    if (!text::trim(l).empty()) lines.emplace_back(text::trim(l));
  }
  if (lines.size() != 1) throw ParseError("expected exactly one line of entities", raw);

  std::string_view line = lines.front();
  if (text::starts_with_ci(line, "output:")) line = text::trim(line.substr(7));
  std::string lowered = text::to_lower(line);
  while (!lowered.empty() && lowered.back() == '.') lowered.pop_back();
  if (text::trim(lowered) == "none") return {};

  std::vector<Entity> out;
  for (const auto& piece : text::split(lowered, '.')) {
    std::string name(text::trim(piece));
    if (name.empty()) continue;
    if (!entity_chars_ok(name) || text::words(name).size() > kMaxWordsPerEntity)
      throw ParseError("not an entity name: '" + name + "'", raw);
    // Collapse runs of inner whitespace.
    std::string compact;
    for (char c : name) {
      if (c == ' ' && !compact.empty() && compact.back() == ' ') continue;
      compact.push_back(c);
    }
    Entity e{std::move(compact)};
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
  }
  if (out.empty()) throw ParseError("entity line holds no entities", raw);
  return out;
}

std::string format_entity_line(const std::vector<Entity>& entities) {
  return text::join(names_of(entities), ". ");
}

ConceptExtractor::ConceptExtractor(Gateway& gateway, PromptTemplate tmpl, ChatSettings settings)
    : gateway_(gateway), template_(std::move(tmpl)), settings_(settings) {}

ExtractionResult ConceptExtractor::extract(std::string_view response_text) const {
  if (text::trim(response_text).empty()) throw InvalidRequest("response text is empty");
  const auto rendered = render(template_, {{"sentence", std::string(text::trim(response_text))}});
  ChatRequest req{rendered.system_message, rendered.prompt, settings_.temperature, settings_.max_tokens};
  ExtractionResult result;
  result.entities = chat_with_retry(gateway_, req, result.raw_outputs, parse_entity_line);
  return result;
}

}  // namespace halcor
