#include "halcor/yesno.hpp"

#include <algorithm>
#include <array>

#include "text_util.hpp"

namespace halcor {

namespace {

constexpr std::array<std::string_view, 5> kDeterminers = {"a", "an", "any", "some", "the"};
constexpr std::array<std::string_view, 4> kImageNouns = {"image", "picture", "photo", "photograph"};

bool is_determiner(std::string_view w) {
  return std::find(kDeterminers.begin(), kDeterminers.end(), w) != kDeterminers.end();
}

std::optional<std::size_t> number_word(std::string_view w) {
  static constexpr std::array<std::string_view, 13> kWords = {"zero", "one",   "two",   "three", "four",
                                                              "five", "six",   "seven", "eight", "nine",
                                                              "ten",  "eleven", "twelve"};
  for (std::size_t i = 0; i < kWords.size(); ++i)
    if (kWords[i] == w) return i;
  if (!w.empty() && w.size() < 4 && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return static_cast<std::size_t>(std::stoul(std::string(w)));
  return std::nullopt;
}

struct ThereShape {
  std::string copula;  // "is" or "are"
  std::string rest;    // original-case text after "is there" / "are there", no '?'
};

std::optional<ThereShape> there_shape(std::string_view question) {
  auto cq = core_question(question);
  if (!cq.empty() && cq.back() == '?') cq.pop_back();
  const auto trimmed = std::string(text::trim(cq));
  for (std::string_view copula : {"is", "are"}) {
    const std::string prefix = std::string(copula) + " there ";
    if (text::starts_with_ci(trimmed, prefix))
      return ThereShape{std::string(copula), std::string(text::trim(std::string_view(trimmed).substr(prefix.size())))};
  }
  return std::nullopt;
}

// Drops a trailing "in the image" style location.
std::string without_image_location(const std::string& rest) {
  const auto ws = text::split(rest, ' ');
  // Location must close the phrase: "<...> in the|this image|picture|photo".
  if (ws.size() >= 3) {
    const auto prep = text::to_lower(ws[ws.size() - 3]);
    const auto det = text::to_lower(ws[ws.size() - 2]);
    const auto noun = text::to_lower(ws[ws.size() - 1]);
    const bool is_noun = std::find(kImageNouns.begin(), kImageNouns.end(), noun) != kImageNouns.end();
    if ((prep == "in" || prep == "on") && (det == "the" || det == "this") && is_noun) {
      return text::join(std::vector<std::string>(ws.begin(), ws.end() - 3), " ");
    }
  }
  return rest;
}

}  // namespace

std::string_view to_string(Polarity p) noexcept {
  switch (p) {
    case Polarity::yes: return "yes";
    case Polarity::no: return "no";
    case Polarity::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Polarity> polarity_from_string(std::string_view s) noexcept {
  if (s == "yes") return Polarity::yes;
  if (s == "no") return Polarity::no;
  if (s == "unknown") return Polarity::unknown;
  return std::nullopt;
}

Polarity extract_polarity(std::string_view answer) {
  for (const auto& w : text::words(answer)) {
    if (w == "yes") return Polarity::yes;
    if (w == "no") return Polarity::no;
  }
  return Polarity::unknown;
}

std::string core_question(std::string_view question) {
  const auto q = text::trim(question);
  const auto mark = q.find('?');
  return std::string(mark == std::string_view::npos ? q : q.substr(0, mark + 1));
}

std::optional<std::string> declarativize(std::string_view question, Polarity polarity) {
  if (polarity == Polarity::unknown) return std::nullopt;
  const auto shape = there_shape(question);
  if (!shape || shape->rest.empty()) return std::nullopt;
  std::string rest = shape->rest;
  if (polarity == Polarity::no) {
    const auto space = rest.find(' ');
    const auto first = text::to_lower(rest.substr(0, space));
    const auto tail = space == std::string::npos ? std::string{} : rest.substr(space);
    if (first == "a" || first == "an" || first == "any" || first == "some") {
      rest = "no" + tail;
    } else if (number_word(first) || first == "exactly" || first == "more" || first == "only") {
      rest = "not " + rest;
    } else {
      rest = "no " + rest;
    }
  }
  return "there " + shape->copula + " " + rest;
}

PolarAnswer compose_claim(std::string_view question, std::string_view raw_answer) {
  PolarAnswer out;
  out.polarity = extract_polarity(raw_answer);
  if (out.polarity == Polarity::unknown) return out;
  const std::string word = out.polarity == Polarity::yes ? "Yes" : "No";
  if (auto decl = declarativize(question, out.polarity)) {
    out.claim_text = word + ", " + *decl + ".";
  } else {
    out.claim_text = word + ", the answer to the question \"" + core_question(question) + "\" is " +
                     std::string(to_string(out.polarity)) + ".";
  }
  return out;
}

std::optional<QueriedObject> queried_object(std::string_view question) {
  const auto shape = there_shape(question);
  if (!shape) return std::nullopt;
  auto ws = text::words(without_image_location(shape->rest));
  QueriedObject q;
  std::size_t i = 0;
  if (i + 2 < ws.size() && ws[i] == "a" && ws[i + 1] == "total" && ws[i + 2] == "of") i += 3;
  if (i < ws.size() && is_determiner(ws[i])) {
    ++i;
  } else if (i < ws.size()) {
    if (auto n = number_word(ws[i])) {
      q.number = n;
      ++i;
    }
  }
  if (i >= ws.size()) return std::nullopt;
  q.phrase = text::join(std::vector<std::string>(ws.begin() + static_cast<std::ptrdiff_t>(i), ws.end()), " ");
  return q;
}

PolarityDecision decide_polarity(const CorrectedResponse& corrected, const VisualKnowledgeBase& kb,
                                 std::string_view question, Polarity unknown_default) {
  if (auto q = queried_object(question)) {
    for (const auto& claim : kb.count_claims) {
      if (!claim.entity) continue;
      const auto& e = *claim.entity;
      if (q->phrase != e && q->phrase != e + "s" && q->phrase != e + "es") continue;
      const auto count = claim.boxes.size();
      const bool yes = q->number ? count == *q->number : count >= 1;
      return {yes ? Polarity::yes : Polarity::no, true, false};
    }
  }

  const auto plain = strip_annotations(corrected.text);
  if (const auto p = extract_polarity(plain); p != Polarity::unknown) return {p, false, false};
  const auto lower = text::to_lower(plain);
  for (std::string_view cue : {"there is no", "there are no", "there are not", "there is not"}) {
    if (lower.find(cue) != std::string::npos) return {Polarity::no, false, false};
  }
  if (text::contains_word_ci(plain, "not")) return {Polarity::no, false, false};
  for (std::string_view cue : {"there is", "there are"}) {
    if (lower.find(cue) != std::string::npos) return {Polarity::yes, false, false};
  }
  const auto fallback = unknown_default == Polarity::unknown ? Polarity::no : unknown_default;
  return {fallback, false, true};
}

}  // namespace halcor
