#include "halcor/annotation.hpp"

#include <charconv>
#include <optional>
#include <variant>

#include "text_util.hpp"

namespace halcor {

namespace {

bool is_entity_char(char c) noexcept { return text::is_word_char(c) || c == '-' || c == '\'' || c == '_'; }
bool is_blank(char c) noexcept { return c == ' ' || c == '\t'; }
bool is_number_char(char c) noexcept {
  return (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E';
}

struct Candidate {
  Annotation annotation;
  std::size_t strip_begin = 0;  // first character removed by strip
  std::size_t end = 0;          // one past the closing parenthesis
};

// Either an accepted candidate or the reason it was rejected.
using CandidateResult = std::variant<Candidate, std::string>;

class CandidateParser {
 public:
  CandidateParser(std::string_view text, std::size_t open) : text_(text), pos_(open + 1), open_(open) {}

  CandidateResult parse() {
    Candidate c;
    c.annotation.offset = open_;
    std::size_t k = open_;
    while (k > 0 && is_blank(text_[k - 1])) --k;
    std::size_t e = k;
    while (e > 0 && is_entity_char(text_[e - 1])) --e;
    if (e == k) return std::string("annotation has no entity before '('");
    c.annotation.entity = std::string(text_.substr(e, k - e));
    c.strip_begin = k;

    for (;;) {
      skip_blanks();
      auto box = parse_box();
      if (auto* err = std::get_if<std::string>(&box)) return *err;
      c.annotation.boxes.push_back(std::get<BoundingBox>(box));
      skip_blanks();
      if (at(';')) {
        ++pos_;
        continue;
      }
      if (at(')')) {
        c.end = pos_ + 1;
        return c;
      }
      return std::string("expected ';' or ')' after a box");
    }
  }

 private:
  bool at(char ch) const { return pos_ < text_.size() && text_[pos_] == ch; }
  void skip_blanks() {
    while (pos_ < text_.size() && is_blank(text_[pos_])) ++pos_;
  }

  std::variant<double, std::string> parse_number() {
    skip_blanks();
    const auto start = pos_;
    while (pos_ < text_.size() && is_number_char(text_[pos_])) ++pos_;
    if (start == pos_) return std::string("non-numeric coordinate");
    const auto token = text_.substr(start, pos_ - start);
    double v = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::string("non-numeric coordinate '") + std::string(token) + "'";
    skip_blanks();
    return v;
  }

  std::variant<BoundingBox, std::string> parse_box() {
    if (!at('[')) return std::string("expected '['");
    ++pos_;
    double v[4];
    for (int i = 0; i < 4; ++i) {
      auto n = parse_number();
      if (auto* err = std::get_if<std::string>(&n)) return *err;
      v[i] = std::get<double>(n);
      if (i < 3) {
        if (!at(',')) return std::string("expected 4 comma-separated coordinates");
        ++pos_;
      }
    }
    if (!at(']')) return std::string("expected ']' after 4 coordinates");
    ++pos_;
    const BoundingBox box{v[0], v[1], v[2], v[3]};
    for (double x : v) {
      if (!(x >= 0.0 && x <= 1.0)) return std::string("coordinate outside [0,1]");
    }
    if (box.x1 >= box.x2) return std::string("x1 >= x2");
    if (box.y1 >= box.y2) return std::string("y1 >= y2");
    return box;
  }

  std::string_view text_;
  std::size_t pos_;
  std::size_t open_;
};

bool starts_candidate(std::string_view text, std::size_t open) {
  std::size_t j = open + 1;
  while (j < text.size() && is_blank(text[j])) ++j;
  return j < text.size() && text[j] == '[';
}

struct FullScan {
  std::vector<Candidate> accepted;
  std::vector<AnnotationDiagnostic> diagnostics;
};

FullScan scan(std::string_view text) {
  FullScan out;
  std::size_t i = 0;
  while ((i = text.find('(', i)) != std::string_view::npos) {
    if (!starts_candidate(text, i)) {
      ++i;
      continue;
    }
    auto result = CandidateParser(text, i).parse();
    if (auto* c = std::get_if<Candidate>(&result)) {
      i = c->end;
      out.accepted.push_back(std::move(*c));
    } else {
      out.diagnostics.push_back({i, std::get<std::string>(result)});
      ++i;
    }
  }
  return out;
}

}  // namespace

AnnotationScan parse_annotations(std::string_view text) {
  auto full = scan(text);
  AnnotationScan out;
  out.diagnostics = std::move(full.diagnostics);
  for (auto& c : full.accepted) out.annotations.push_back(std::move(c.annotation));
  return out;
}

std::string strip_annotations(std::string_view text) {
  std::string current(text);
  for (;;) {
    const auto full = scan(current);
    if (full.accepted.empty()) return current;
    std::string next;
    next.reserve(current.size());
    std::size_t pos = 0;
    for (const auto& c : full.accepted) {
      next.append(current, pos, c.strip_begin - pos);
      pos = c.end;
    }
    next.append(current, pos, std::string::npos);
    current = std::move(next);
  }
}

}  // namespace halcor
