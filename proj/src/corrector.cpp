#include "halcor/corrector.hpp"

#include <map>

#include <fmt/format.h>

#include "halcor/errors.hpp"
#include "text_util.hpp"

namespace halcor {

namespace {

const std::map<std::string, int, std::less<>>& number_words() {
  static const std::map<std::string, int, std::less<>> words = {
      {"zero", 0},     {"no", 0},        {"one", 1},       {"single", 1},   {"two", 2},    {"pair", 2},
      {"three", 3},    {"four", 4},      {"five", 5},      {"six", 6},      {"seven", 7},  {"eight", 8},
      {"nine", 9},     {"ten", 10},      {"eleven", 11},   {"twelve", 12},  {"thirteen", 13},
      {"fourteen", 14}, {"fifteen", 15}, {"sixteen", 16},  {"seventeen", 17}, {"eighteen", 18},
      {"nineteen", 19}, {"twenty", 20},
  };
  return words;
}

std::optional<int> as_number(const std::string& word) {
  if (auto it = number_words().find(word); it != number_words().end()) return it->second;
  if (!word.empty() && word.size() < 4 && std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::stoi(word);
  return std::nullopt;
}

}  // namespace

CorrectedResponse parse_correction(std::string_view llm_output, std::string_view source,
                                   const VisualKnowledgeBase& kb) {
  const std::string raw(llm_output);
  auto body = text::trim(llm_output);
  if (text::starts_with_ci(body, "refined passage:")) body = text::trim(body.substr(16));
  if (body.empty()) throw ParseError("correction output is empty", raw);

  auto scan = parse_annotations(body);
  if (!scan.diagnostics.empty()) {
    const auto& d = scan.diagnostics.front();
    throw ParseError(fmt::format("malformed annotation at offset {}: {}", d.offset, d.message), raw);
  }
  const auto known = kb.all_boxes();
  for (const auto& a : scan.annotations) {
    for (const auto& box : a.boxes) {
      const bool found = std::any_of(known.begin(), known.end(), [&](const auto& k) { return same_at_3dp(k, box); });
      if (!found)
        throw ParseError(fmt::format("annotation of '{}' cites {} which is not in the knowledge base", a.entity,
                                     format_box(box)),
                         raw);
    }
  }
  return {std::string(body), std::move(scan.annotations), std::string(source)};
}

std::vector<std::string> check_counts(std::string_view corrected_text, const VisualKnowledgeBase& kb) {
  std::vector<std::string> warnings;
  const auto ws = text::words(strip_annotations(corrected_text));
  for (const auto& claim : kb.count_claims) {
    if (!claim.entity) continue;
    const auto ew = text::words(*claim.entity);
    if (ew.empty()) continue;
    const auto expected = claim.boxes.size();
    for (std::size_t i = 1; i + ew.size() <= ws.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < ew.size() && match; ++k) {
        const auto& w = ws[i + k];
        const auto& t = ew[k];
        match = w == t || (k + 1 == ew.size() && (w == t + "s" || w == t + "es"));
      }
      if (!match) continue;
      // "a pair of dogs": skip the "of".
      std::size_t before = i - 1;
      if (ws[before] == "of" && before > 0) --before;
      const auto stated = as_number(ws[before]);
      if (stated && static_cast<std::size_t>(*stated) != expected) {
        warnings.push_back(fmt::format("text states {} {} but the knowledge base counts {}", ws[before],
                                       *claim.entity, expected));
      }
    }
  }
  return warnings;
}

Corrector::Corrector(Gateway& gateway, PromptTemplate tmpl, ChatSettings settings)
    : gateway_(gateway), template_(std::move(tmpl)), settings_(settings) {}

CorrectionResult Corrector::correct(std::string_view passage, const VisualKnowledgeBase& kb,
                                    const std::optional<std::string>& question) const {
  CorrectionResult result;
  const auto trimmed = std::string(text::trim(passage));
  if (kb.empty()) {
    if (trimmed.empty()) throw InvalidRequest("nothing to correct: empty passage and knowledge base");
    result.response = {trimmed, {}, trimmed};
    result.warnings.push_back("no evidence: knowledge base is empty, passage kept unchanged");
    return result;
  }
  std::string question_block;
  if (question && !text::trim(*question).empty())
    question_block = "Question:\n" + std::string(text::trim(*question)) + "\n\n";
  const auto rendered = render(template_, {{"question_block", question_block},
                                           {"information", serialize_kb(kb)},
                                           {"passage", trimmed}});
  result.prompt = rendered.prompt;
  ChatRequest req{rendered.system_message, rendered.prompt, settings_.temperature, settings_.max_tokens};
  result.response = chat_with_retry(gateway_, req, result.raw_outputs,
                                    [&](std::string_view out) { return parse_correction(out, trimmed, kb); });
  result.warnings = check_counts(result.response.text, kb);
  return result;
}

}  // namespace halcor
