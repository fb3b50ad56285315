#pragma once

#include <optional>
#include <string>
#include <vector>

#include "halcor/box.hpp"
#include "halcor/gateway.hpp"
#include "halcor/question_formulator.hpp"

namespace halcor {

struct ObjectEvidence {
  std::string entity;
  std::size_t count = 0;
  std::vector<BoundingBox> boxes;  // boxes.size() == count

  friend bool operator==(const ObjectEvidence&, const ObjectEvidence&) = default;
};

struct QAPair {
  Question question;
  std::string answer;
  std::vector<BoundingBox> evidence_boxes;

  friend bool operator==(const QAPair&, const QAPair&) = default;
};

inline constexpr double kDefaultSuppressionIou = 0.9;

// Duplicate suppression over detections of a single phrase. Boxes whose IoU
// exceeds `iou_threshold` are linked, and every connected group keeps only its
// best box under detection_order. Linking is transitive, so lowering the
// threshold can only merge groups: the surviving count never grows.
// Boxes that coincide at 3 decimals are always merged. Output keeps
// detection_order.
std::vector<Detection> suppress_duplicates(std::vector<Detection> detections,
                                           std::optional<double> iou_threshold);

struct ValidatorOptions {
  double box_threshold = kDefaultBoxThreshold;
  double text_threshold = kDefaultTextThreshold;
  std::optional<double> suppression_iou = kDefaultSuppressionIou;  // nullopt disables
  bool batch_phrases = true;  // one detect call per image with every phrase
};

struct SkippedQuestion {
  Question question;
  std::string reason;

  friend bool operator==(const SkippedQuestion&, const SkippedQuestion&) = default;
};

struct AttributeValidation {
  std::vector<QAPair> pairs;
  std::vector<SkippedQuestion> skipped;
};

class VisualValidator {
 public:
  VisualValidator(Gateway& gateway, ValidatorOptions options = {});

  std::vector<ObjectEvidence> validate_objects(const std::string& image_ref,
                                               const std::vector<Entity>& entities) const;

  // Questions whose every entity has count 0 are skipped; VQA calls run
  // concurrently (bounded by the gateway) and results keep input order.
  AttributeValidation validate_attributes(const std::string& image_ref, const std::vector<Question>& questions,
                                          const std::vector<ObjectEvidence>& evidence) const;

 private:
  Gateway& gateway_;
  ValidatorOptions options_;
};

}  // namespace halcor
