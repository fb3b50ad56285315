#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "halcor/errors.hpp"
#include "halcor/gateway.hpp"
#include "halcor/prompt_template.hpp"

namespace halcor {

// A key concept: lowercase, trimmed, singular common noun with no period.
struct Entity {
  std::string name;

  friend auto operator<=>(const Entity&, const Entity&) = default;
};

std::vector<std::string> names_of(const std::vector<Entity>& entities);

struct ChatSettings {
  double temperature = 0.0;
  int max_tokens = 1024;
};

// Parses one line of period-separated entities. "None" yields an empty list.
// Duplicates are merged keeping the first occurrence. Throws ParseError when
// the text is not a single line of short noun phrases.
std::vector<Entity> parse_entity_line(std::string_view llm_output);

// Joins names with ". ", the inverse of parse_entity_line.
std::string format_entity_line(const std::vector<Entity>& entities);

struct ExtractionResult {
  std::vector<Entity> entities;
  std::vector<std::string> raw_outputs;  // one per LLM attempt
};

class ConceptExtractor {
 public:
  ConceptExtractor(Gateway& gateway, PromptTemplate tmpl, ChatSettings settings = {});

  ExtractionResult extract(std::string_view response_text) const;

 private:
  Gateway& gateway_;
  PromptTemplate template_;
  ChatSettings settings_;
};

// Runs one chat call and parses it; on ParseError retries once at temperature
// 0 without touching the cache, then lets the second ParseError escape. Every raw
// completion is appended to `raw_outputs`.
template <typename Parser>
auto chat_with_retry(Gateway& gateway, ChatRequest request, std::vector<std::string>& raw_outputs,
                     Parser&& parse) -> decltype(parse(std::string_view{})) {
  auto first = gateway.chat(request);
  raw_outputs.push_back(first);
  try {
    return parse(std::string_view(first));
  } catch (const ParseError&) {
  }
  request.temperature = 0.0;
  auto second = gateway.chat(request, CachePolicy::bypass);
  raw_outputs.push_back(second);
  return parse(std::string_view(second));
}

}  // namespace halcor
