#include "halcor/claim_builder.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "halcor/errors.hpp"
#include "text_util.hpp"

namespace halcor {

Claim count_claim(const ObjectEvidence& evidence) {
  if (evidence.count == 0) return {"There is no " + evidence.entity + ".", ClaimKind::count, evidence.entity, {}};
  return {"There are " + std::to_string(evidence.count) + " " + evidence.entity + ".", ClaimKind::count,
          evidence.entity, evidence.boxes};
}

ClaimKind claim_kind_for(const Question& question) {
  if (question.kind == AttributeKind::position || question.entities.size() >= 2) return ClaimKind::overall;
  return ClaimKind::specific;
}

namespace {

std::string clean_answer(std::string_view answer) {
  auto a = text::trim(answer);
  while (!a.empty() && (a.back() == '.' || a.back() == '!')) a.remove_suffix(1);
  return std::string(text::trim(a));
}

std::string sentence(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s + ".";
}

// Subject phrase is an optional determiner, at most one modifier, then one of
// the question's entities (singular or a simple plural): "the hat",
// "the black cats". Longer phrases are left to the merge prompt.
bool names_entity(std::string_view subject, const std::vector<std::string>& entities) {
  auto ws = text::words(subject);
  static constexpr std::string_view kDeterminers[] = {"the", "a", "an", "this", "that", "these", "those"};
  if (!ws.empty() && std::find(std::begin(kDeterminers), std::end(kDeterminers), ws.front()) != std::end(kDeterminers))
    ws.erase(ws.begin());
  for (const auto& e : entities) {
    const auto ew = text::words(e);
    if (ew.empty() || ws.size() < ew.size() || ws.size() > ew.size() + 1) continue;
    const auto offset = ws.size() - ew.size();
    bool match = true;
    for (std::size_t k = 0; k < ew.size() && match; ++k) {
      const auto& w = ws[offset + k];
      const auto& t = ew[k];
      const bool last = k + 1 == ew.size();
      match = w == t || (last && (w == t + "s" || w == t + "es"));
    }
    if (match) return true;
  }
  return false;
}

struct Shape {
  std::string_view prefix;
  std::string_view suffix;
  std::string_view copula;
};

constexpr Shape kShapes[] = {
    {"what color is ", "", "is"},   {"what colour is ", "", "is"}, {"what color are ", "", "are"},
    {"what is ", " doing", "is"},   {"what are ", " doing", "are"}, {"where is ", "", "is"},
    {"where are ", "", "are"},
};

}  // namespace

std::optional<std::string> rule_based_claim(const QAPair& qa) {
  auto q = text::trim(qa.question.text);
  if (q.empty() || q.back() != '?') return std::nullopt;
  q.remove_suffix(1);
  q = text::trim(q);
  const std::string lower = text::to_lower(q);
  const std::string answer = clean_answer(qa.answer);
  if (answer.empty()) return std::nullopt;

  for (const auto& shape : kShapes) {
    if (!lower.starts_with(shape.prefix) || !lower.ends_with(shape.suffix)) continue;
    if (lower.size() <= shape.prefix.size() + shape.suffix.size()) continue;
    const auto subject =
        text::trim(q.substr(shape.prefix.size(), q.size() - shape.prefix.size() - shape.suffix.size()));
    if (!names_entity(subject, qa.question.entities)) continue;
    return sentence(std::string(subject) + " " + std::string(shape.copula) + " " + answer);
  }

  // "What is the man holding?" -> "The man is holding {answer}."
  for (std::string_view aux : {"what is ", "what are "}) {
    if (!lower.starts_with(aux)) continue;
    const auto rest = text::trim(q.substr(aux.size()));
    const auto space = rest.rfind(' ');
    if (space == std::string_view::npos) continue;
    const auto verb = rest.substr(space + 1);
    const auto subject = text::trim(rest.substr(0, space));
    if (verb.size() <= 4 || !text::to_lower(verb).ends_with("ing")) continue;
    if (!names_entity(subject, qa.question.entities)) continue;
    return sentence(std::string(subject) + " " + std::string(text::trim(aux.substr(5))) + " " +
                    std::string(verb) + " " + answer);
  }

  // "Is the cat black?" + yes/no -> "The cat is black." / "The cat is not black."
  for (std::string_view aux : {"is ", "are "}) {
    if (!lower.starts_with(aux)) continue;
    const auto polarity = text::words(answer);
    if (polarity.empty() || (polarity.front() != "yes" && polarity.front() != "no")) return std::nullopt;
    const auto rest = q.substr(aux.size());
    const auto words = text::split(rest, ' ');
    // Shortest prefix that names an entity is the subject; the remainder is the predicate.
    for (std::size_t cut = 1; cut < words.size(); ++cut) {
      std::vector<std::string> head(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(cut));
      std::vector<std::string> tail(words.begin() + static_cast<std::ptrdiff_t>(cut), words.end());
      const auto subject = text::join(head, " ");
      if (!names_entity(subject, qa.question.entities)) continue;
      const std::string copula(text::trim(aux));
      return sentence(subject + " " + copula + (polarity.front() == "no" ? " not " : " ") + text::join(tail, " "));
    }
    return std::nullopt;
  }
  return std::nullopt;
}

std::string parse_claim_line(std::string_view llm_output) {
  const std::string raw(llm_output);
  std::vector<std::string> lines;
  for (const auto& l : text::split_lines(llm_output)) {
    if (!text::trim(l).empty()) lines.emplace_back(text::trim(l));
  }
  if (lines.size() != 1) throw ParseError("expected a single claim line", raw);
  std::string_view line = lines.front();
  if (text::starts_with_ci(line, "claim:")) line = text::trim(line.substr(6));
  if (line.empty() || (line.back() != '.' && line.back() != '!'))
    throw ParseError("claim is not a declarative sentence", raw);
  return std::string(line);
}

std::optional<std::size_t> VisualKnowledgeBase::count_of(std::string_view entity) const {
  for (const auto& c : count_claims) {
    if (c.entity && *c.entity == entity) return c.boxes.size();
  }
  return std::nullopt;
}

std::vector<BoundingBox> VisualKnowledgeBase::all_boxes() const {
  std::vector<BoundingBox> out;
  for (const auto& s : specific_claims) out.push_back(s.box);
  return out;
}

VisualKnowledgeBase build_knowledge_base(const std::vector<ObjectEvidence>& evidence,
                                         const std::vector<Claim>& attribute_claims) {
  VisualKnowledgeBase kb;
  std::map<std::string, std::vector<std::string>> per_entity;
  for (const auto& c : attribute_claims) {
    if (c.kind == ClaimKind::specific && c.entity) {
      per_entity[*c.entity].push_back(c.text);
    } else if (c.kind == ClaimKind::overall) {
      kb.overall_claims.push_back(c);
    }
  }
  for (const auto& ev : evidence) {
    kb.count_claims.push_back(count_claim(ev));
    for (std::size_t i = 0; i < ev.boxes.size(); ++i) {
      InstanceClaims inst{ev.entity, i + 1, ev.boxes[i], {}};
      if (auto it = per_entity.find(ev.entity); it != per_entity.end()) inst.claims = it->second;
      kb.specific_claims.push_back(std::move(inst));
    }
  }
  return kb;
}

std::string serialize_kb(const VisualKnowledgeBase& kb) {
  std::vector<std::string> sections;
  if (!kb.count_claims.empty()) {
    std::string s = "Count:";
    for (const auto& c : kb.count_claims) s += "\n" + c.text;
    sections.push_back(std::move(s));
  }
  if (!kb.specific_claims.empty()) {
    std::string s = "Specific:";
    for (const auto& inst : kb.specific_claims) {
      s += "\n" + inst.entity + " " + std::to_string(inst.index) + ": " + format_box(inst.box);
      for (const auto& c : inst.claims) s += " " + c;
    }
    sections.push_back(std::move(s));
  }
  if (!kb.overall_claims.empty()) {
    std::string s = "Overall:";
    for (const auto& c : kb.overall_claims) s += "\n" + c.text;
    sections.push_back(std::move(s));
  }
  return text::join(sections, "\n\n");
}

ClaimGenerator::ClaimGenerator(Gateway& gateway, PromptTemplate tmpl, ClaimMode mode, ChatSettings settings)
    : gateway_(gateway), template_(std::move(tmpl)), mode_(mode), settings_(settings) {}

ClaimResult ClaimGenerator::qa_to_claim(const QAPair& qa) const {
  if (text::trim(qa.answer).empty()) throw InvalidRequest("QA pair has an empty answer");
  ClaimResult result;
  const auto kind = claim_kind_for(qa.question);
  result.claim.kind = kind;
  if (kind == ClaimKind::specific && !qa.question.entities.empty()) result.claim.entity = qa.question.entities.front();
  result.claim.boxes = qa.evidence_boxes;

  if (mode_ != ClaimMode::llm) {
    if (auto text = rule_based_claim(qa)) {
      result.claim.text = std::move(*text);
      result.from_rule = true;
      return result;
    }
    if (mode_ == ClaimMode::rule) {
      auto q = text::trim(qa.question.text);
      if (!q.empty() && q.back() == '?') q.remove_suffix(1);
      result.claim.text = std::string(q) + ": " + clean_answer(qa.answer) + ".";
      result.from_rule = true;
      return result;
    }
  }
  const auto rendered = render(template_, {{"question", std::string(text::trim(qa.question.text))},
                                           {"answer", std::string(text::trim(qa.answer))}});
  ChatRequest req{rendered.system_message, rendered.prompt, settings_.temperature, settings_.max_tokens};
  result.claim.text = chat_with_retry(gateway_, req, result.raw_outputs, parse_claim_line);
  return result;
}

}  // namespace halcor
