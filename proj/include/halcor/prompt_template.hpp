#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace halcor {

// A prompt with `{{name}}` placeholders. The reserved placeholder
// `{{examples}}` expands to the in-context example blocks, separated by a
// blank line, in the order they were declared.
struct PromptTemplate {
  std::string id;
  int version = 1;
  std::string system_message;
  std::string body;
  std::vector<std::string> placeholders;
  std::vector<std::string> in_context_examples;
};

struct RenderedPrompt {
  std::string system_message;
  std::string prompt;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

inline constexpr std::string_view kExamplesPlaceholder = "examples";

// Substitutes every placeholder in a single pass; substituted text is never
// rescanned. Throws MissingBinding for an unbound name.
RenderedPrompt render(const PromptTemplate& tmpl, const Bindings& bindings);

// Placeholder names in order of first appearance, `examples` included.
std::vector<std::string> placeholders_in(std::string_view body);

// Template file layout:
//
//   ---
//   id: concept_extraction
//   version: 1
//   placeholders: sentence
//   ---
//   @system
//   ...system message...
//   @prompt
//   ...body with {{placeholders}}...
//   @example
//   ...one in-context block...
//
// Declared placeholders must match the body exactly (apart from `examples`).
PromptTemplate parse_template(std::string_view source);
PromptTemplate load_template(const std::filesystem::path& file);

namespace template_ids {
inline constexpr std::string_view kConceptExtraction = "concept_extraction";
inline constexpr std::string_view kQuestionFormulation = "question_formulation";
inline constexpr std::string_view kQaToClaim = "qa_to_claim";
inline constexpr std::string_view kCorrection = "hallucination_correction";
inline constexpr std::string_view kJudge = "pairwise_judge";
}  // namespace template_ids

// Templates by id. `builtin()` holds the copies compiled from templates/;
// `with_overrides` replaces any of them with *.tmpl files from a directory.
class TemplateSet {
 public:
  static TemplateSet builtin();
  TemplateSet with_overrides(const std::filesystem::path& dir) const;

  const PromptTemplate& get(std::string_view id) const;
  bool contains(std::string_view id) const;
  void put(PromptTemplate tmpl);

 private:
  std::map<std::string, PromptTemplate, std::less<>> by_id_;
};

}  // namespace halcor
