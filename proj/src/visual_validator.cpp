#include "halcor/visual_validator.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <numeric>

#include "text_util.hpp"

namespace halcor {

std::vector<Detection> suppress_duplicates(std::vector<Detection> detections,
                                           std::optional<double> iou_threshold) {
  std::sort(detections.begin(), detections.end(), detection_order);
  const auto n = detections.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool linked = same_at_3dp(detections[i].box, detections[j].box) ||
                          (iou_threshold && iou(detections[i].box, detections[j].box) > *iou_threshold);
      if (!linked) continue;
      // The smaller index (better detection) stays the root.
      const auto a = find(i), b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<Detection> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) == i) kept.push_back(detections[i]);
  }
  return kept;
}

VisualValidator::VisualValidator(Gateway& gateway, ValidatorOptions options)
    : gateway_(gateway), options_(options) {}

std::vector<ObjectEvidence> VisualValidator::validate_objects(const std::string& image_ref,
                                                              const std::vector<Entity>& entities) const {
  std::vector<ObjectEvidence> out;
  if (entities.empty()) return out;
  const auto names = names_of(entities);

  std::map<std::string, std::vector<Detection>> by_phrase;
  auto run = [&](std::vector<std::string> phrases) {
    DetectRequest req{image_ref, std::move(phrases), options_.box_threshold, options_.text_threshold};
    for (auto& d : gateway_.detect(req)) by_phrase[d.phrase].push_back(std::move(d));
  };
  if (options_.batch_phrases) {
    run(names);
  } else {
    for (const auto& n : names) run({n});
  }

  for (const auto& name : names) {
    ObjectEvidence ev{name, 0, {}};
    if (auto it = by_phrase.find(name); it != by_phrase.end()) {
      for (const auto& d : suppress_duplicates(it->second, options_.suppression_iou)) ev.boxes.push_back(d.box);
    }
    ev.count = ev.boxes.size();
    out.push_back(std::move(ev));
  }
  return out;
}

AttributeValidation VisualValidator::validate_attributes(const std::string& image_ref,
                                                         const std::vector<Question>& questions,
                                                         const std::vector<ObjectEvidence>& evidence) const {
  std::map<std::string, const ObjectEvidence*> by_entity;
  for (const auto& ev : evidence) by_entity[ev.entity] = &ev;

  struct Pending {
    const Question* question;
    std::vector<BoundingBox> boxes;
    std::future<std::string> answer;
  };
  std::vector<Pending> pending;
  AttributeValidation result;

  for (const auto& q : questions) {
    std::vector<BoundingBox> boxes;
    bool any_present = false;
    for (const auto& e : q.entities) {
      auto it = by_entity.find(e);
      if (it == by_entity.end() || it->second->count == 0) continue;
      any_present = true;
      boxes.insert(boxes.end(), it->second->boxes.begin(), it->second->boxes.end());
    }
    if (!any_present) {
      result.skipped.push_back({q, "no involved entity was detected"});
      continue;
    }
    auto fut = std::async(std::launch::async, [this, image_ref, text = q.text] {
      return gateway_.vqa(VqaRequest{image_ref, text});
    });
    pending.push_back({&q, std::move(boxes), std::move(fut)});
  }

  for (auto& p : pending) {
    auto answer = std::string(text::trim(p.answer.get()));
    if (answer.empty()) {
      result.skipped.push_back({*p.question, "empty VQA answer"});
      continue;
    }
    result.pairs.push_back({*p.question, std::move(answer), std::move(p.boxes)});
  }
  return result;
}

}  // namespace halcor
