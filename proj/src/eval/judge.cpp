#include "halcor/eval/judge.hpp"

#include <charconv>
#include <optional>
#include <vector>

#include <fmt/format.h>

#include "halcor/errors.hpp"
#include "../text_util.hpp"

namespace halcor::eval {

std::string build_judge_prompt(const PromptTemplate& judge_template, std::string_view response_1,
                               std::string_view response_2) {
  if (text::trim(response_1).empty() || text::trim(response_2).empty())
    throw InvalidRequest("judge prompt needs two non-empty responses");
  return render(judge_template, {{"response_1", std::string(response_1)}, {"response_2", std::string(response_2)}})
      .prompt;
}

namespace {

constexpr std::string_view kScoresLabel = "scores of the two answers:";
constexpr std::string_view kReasonLabel = "reason:";

struct Section {
  std::vector<std::string> lines;
};

std::optional<std::vector<double>> numbers_in(std::string_view line) {
  std::vector<double> out;
  for (const auto& tok : text::split(line, ' ')) {
    const auto t = text::trim(tok);
    if (t.empty()) continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    out.push_back(v);
  }
  return out;
}

std::pair<double, double> scores_of(const Section& s, std::string_view name, std::string_view raw) {
  std::optional<std::vector<double>> found;
  for (std::size_t i = 0; i < s.lines.size() && !found; ++i) {
    auto line = text::trim(s.lines[i]);
    if (text::starts_with_ci(line, kScoresLabel)) {
      auto rest = text::trim(line.substr(kScoresLabel.size()));
      if (rest.empty() && i + 1 < s.lines.size()) rest = text::trim(s.lines[i + 1]);
      found = numbers_in(rest);
      if (!found || found->size() != 2)
        throw ParseError(fmt::format("{} scores are not two numbers: '{}'", name, rest), std::string(raw));
    }
  }
  for (std::size_t i = 0; i < s.lines.size() && !found; ++i) {
    auto n = numbers_in(s.lines[i]);
    if (n && n->size() == 2) found = n;
  }
  if (!found) throw ParseError(fmt::format("{} section has no scores", name), std::string(raw));
  for (double v : *found) {
    if (!(v >= 1.0 && v <= 10.0))
      throw ParseError(fmt::format("{} score {} is outside 1..10", name, v), std::string(raw));
  }
  return {(*found)[0], (*found)[1]};
}

std::string reason_of(const Section& s) {
  std::vector<std::string> out;
  bool in_reason = false;
  for (const auto& l : s.lines) {
    auto line = text::trim(l);
    if (text::starts_with_ci(line, kReasonLabel)) {
      in_reason = true;
      line = text::trim(line.substr(kReasonLabel.size()));
    }
    if (in_reason && !line.empty()) out.emplace_back(line);
  }
  return text::join(out, " ");
}

}  // namespace

JudgeScores parse_judge_scores(std::string_view judge_output) {
  const std::string raw(judge_output);
  std::optional<Section> accuracy, detailedness;
  Section* current = nullptr;
  for (const auto& l : text::split_lines(judge_output)) {
    const auto line = text::trim(l);
    std::optional<Section>* target = nullptr;
    std::string_view rest;
    if (text::starts_with_ci(line, "accuracy:")) {
      target = &accuracy;
      rest = line.substr(9);
    } else if (text::starts_with_ci(line, "detailedness:")) {
      target = &detailedness;
      rest = line.substr(13);
    }
    if (target) {
      if (target->has_value()) throw ParseError("judge output repeats a section", raw);
      target->emplace();
      current = &**target;
      if (!text::trim(rest).empty()) current->lines.emplace_back(text::trim(rest));
      continue;
    }
    if (current) current->lines.emplace_back(line);
  }
  if (!accuracy) throw ParseError("judge output has no Accuracy section", raw);
  if (!detailedness) throw ParseError("judge output has no Detailedness section", raw);

  JudgeScores out;
  out.accuracy = scores_of(*accuracy, "Accuracy", raw);
  out.detailedness = scores_of(*detailedness, "Detailedness", raw);
  out.reasons = "Accuracy: " + reason_of(*accuracy) + "\nDetailedness: " + reason_of(*detailedness);
  return out;
}

}  // namespace halcor::eval
