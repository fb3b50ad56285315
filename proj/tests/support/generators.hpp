#pragma once

// Seeded random inputs for the property tests. Plain mt19937_64, no framework.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "halcor/claim_builder.hpp"
#include "halcor/eval/metrics.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[uniform(rng, 0, v.size() - 1)];
}

inline halcor::Polarity polarity(Rng& rng) { return coin(rng) ? halcor::Polarity::yes : halcor::Polarity::no; }

// `n` records on n/2 images (two questions each), with corrected answers.
// The yes-bias is drawn per set so degenerate sets (all yes, all no) show up.
inline std::vector<halcor::eval::EvalRecord> records(Rng& rng, std::size_t n) {
  const double gold_yes = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double answer_yes = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::vector<halcor::eval::EvalRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    halcor::eval::EvalRecord r;
    r.image_ref = "img" + std::to_string(i / 2);
    r.question = "q" + std::to_string(i);
    r.gold = coin(rng, gold_yes) ? halcor::Polarity::yes : halcor::Polarity::no;
    r.raw_polarity = coin(rng, answer_yes) ? halcor::Polarity::yes : halcor::Polarity::no;
    r.corrected_polarity = coin(rng, 0.7) ? r.gold : polarity(rng);
    out.push_back(std::move(r));
  }
  return out;
}

inline halcor::BoundingBox box(Rng& rng) {
  std::uniform_int_distribution<int> milli(0, 1000);
  int x1 = milli(rng), x2 = milli(rng), y1 = milli(rng), y2 = milli(rng);
  if (x1 > x2) std::swap(x1, x2);
  if (y1 > y2) std::swap(y1, y2);
  if (x1 == x2) x1 == 0 ? ++x2 : --x1;
  if (y1 == y2) y1 == 0 ? ++y2 : --y1;
  return {x1 / 1000.0, y1 / 1000.0, x2 / 1000.0, y2 / 1000.0};
}

inline const std::vector<std::string>& nouns() {
  static const std::vector<std::string> v = {"dog", "cat", "car", "red car", "bus", "glass", "person",
                                             "umbrella", "dish", "apple", "fire hydrant", "bird"};
  return v;
}

inline halcor::VisualKnowledgeBase knowledge_base(Rng& rng) {
  halcor::VisualKnowledgeBase kb;
  const std::size_t entities = uniform(rng, 0, 4);
  for (std::size_t e = 0; e < entities; ++e) {
    halcor::ObjectEvidence ev;
    ev.entity = pick(rng, nouns());
    ev.count = uniform(rng, 0, 3);
    for (std::size_t i = 0; i < ev.count; ++i) ev.boxes.push_back(box(rng));
    kb.count_claims.push_back(halcor::count_claim(ev));
    for (std::size_t i = 0; i < ev.count; ++i)
      kb.specific_claims.push_back({ev.entity, i + 1, ev.boxes[i], {}});
  }
  if (coin(rng, 0.3)) kb.overall_claims.push_back({"The dog is next to the cat.", halcor::ClaimKind::overall, {}, {}});
  return kb;
}

// Mostly annotation-shaped noise: entity words, brackets, numbers in and out
// of range, separators and arbitrary bytes.
inline std::string annotation_noise(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "dog", "cat", " ", "  ", "(", ")", "[", "]", ",", ";", ".", "0.1", "0.25", "0.9", "1", "0", "1.5",
      "-0.2", "1e-1", "x", "\t", "\n", "the ", "a man", "([", "])", "([0.1,0.2,0.3,0.4])",
      "([0.5,0.5,0.6,0.9];[0.1,0.1,0.2,0.2])", "([0.4,0.2,0.3,0.4])", "( [0.100, 0.200, 0.300, 0.400] )"};
  std::string s;
  const std::size_t n = uniform(rng, 0, 24);
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(rng, 0.05))
      s.push_back(static_cast<char>(uniform(rng, 1, 255)));
    else
      s += pick(rng, pieces);
  }
  return s;
}

}  // namespace gen
