#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halcor/eval/metrics.hpp"

namespace halcor::eval {

// image_ref -> object names present in the image.
using ObjectAnnotations = std::map<std::string, std::vector<std::string>>;

struct ObjectStatistics {
  std::map<std::string, std::size_t> frequency;                                 // images containing the object
  std::map<std::string, std::map<std::string, std::size_t>> cooccurrence;  // images containing both
};

// Counts taken from the annotations themselves, for when no sidecar is given.
ObjectStatistics statistics_of(const ObjectAnnotations& annotations);

// Sidecar layout: {"frequency": {obj: n}, "cooccurrence": {obj: {obj: n}}}.
ObjectStatistics statistics_from_json(const nlohmann::json& j);
ObjectAnnotations annotations_from_json(const nlohmann::json& j);

struct PopeBuildOptions {
  Subset mode = Subset::random;         // random, popular or adversarial
  std::size_t positives_per_image = 3;  // negatives match the positive count
  std::optional<std::size_t> max_images;
  std::uint64_t seed = 0;
};

// "Is there a {object} in the image?" records, gold yes for sampled present
// objects and gold no for absent ones. Negatives: random samples uniformly
// from absent objects, popular takes the most frequent, adversarial the ones
// co-occurring most with the present objects. Images with no absent
// candidate get fewer negatives. Answers are left empty.
std::vector<EvalRecord> build_pope(const ObjectAnnotations& annotations, const ObjectStatistics& stats,
                                   const PopeBuildOptions& options);

std::string pope_question(const std::string& object);

}  // namespace halcor::eval
