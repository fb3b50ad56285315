#include "halcor/eval/pope_builder.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <fmt/format.h>

#include "halcor/errors.hpp"

namespace halcor::eval {

using nlohmann::json;

ObjectStatistics statistics_of(const ObjectAnnotations& annotations) {
  ObjectStatistics stats;
  for (const auto& [image, objects] : annotations) {
    const std::set<std::string> present(objects.begin(), objects.end());
    for (const auto& a : present) {
      ++stats.frequency[a];
      for (const auto& b : present)
        if (a != b) ++stats.cooccurrence[a][b];
    }
  }
  return stats;
}

ObjectStatistics statistics_from_json(const json& j) {
  ObjectStatistics stats;
  try {
    stats.frequency = j.at("frequency").get<std::map<std::string, std::size_t>>();
    if (j.contains("cooccurrence"))
      stats.cooccurrence = j.at("cooccurrence").get<std::map<std::string, std::map<std::string, std::size_t>>>();
  } catch (const json::exception& e) {
    throw SchemaError(fmt::format("object statistics: {}", e.what()));
  }
  return stats;
}

ObjectAnnotations annotations_from_json(const json& j) {
  try {
    return j.get<ObjectAnnotations>();
  } catch (const json::exception& e) {
    throw SchemaError(fmt::format("object annotations: {}", e.what()));
  }
}

std::string pope_question(const std::string& object) {
  const bool vowel = !object.empty() && std::string_view("aeiou").find(object.front()) != std::string_view::npos;
  return fmt::format("Is there {} {} in the image?", vowel ? "an" : "a", object);
}

std::vector<EvalRecord> build_pope(const ObjectAnnotations& annotations, const ObjectStatistics& stats,
                                   const PopeBuildOptions& options) {
  if (options.mode != Subset::random && options.mode != Subset::popular && options.mode != Subset::adversarial)
    throw InvalidRequest("POPE mode must be random, popular or adversarial");
  std::mt19937_64 rng(options.seed);

  std::vector<std::string> images;
  for (const auto& [image, objects] : annotations)
    if (!objects.empty()) images.push_back(image);
  if (options.max_images && images.size() > *options.max_images) {
    std::shuffle(images.begin(), images.end(), rng);
    images.resize(*options.max_images);
    std::sort(images.begin(), images.end());
  }

  std::vector<EvalRecord> out;
  for (const auto& image : images) {
    const auto& objects = annotations.at(image);
    const std::set<std::string> present_set(objects.begin(), objects.end());
    std::vector<std::string> present(present_set.begin(), present_set.end());
    std::shuffle(present.begin(), present.end(), rng);
    if (present.size() > options.positives_per_image) present.resize(options.positives_per_image);

    std::vector<std::string> absent;
    for (const auto& [name, n] : stats.frequency)
      if (!present_set.count(name)) absent.push_back(name);

    const auto k = std::min(present.size(), absent.size());
    auto frequency = [&](const std::string& o) { return stats.frequency.at(o); };
    if (options.mode == Subset::random) {
      std::shuffle(absent.begin(), absent.end(), rng);
    } else if (options.mode == Subset::popular) {
      std::stable_sort(absent.begin(), absent.end(),
                       [&](const auto& a, const auto& b) { return frequency(a) > frequency(b); });
    } else {
      auto affinity = [&](const std::string& o) {
        std::size_t total = 0;
        for (const auto& p : present_set) {
          auto row = stats.cooccurrence.find(p);
          if (row == stats.cooccurrence.end()) continue;
          if (auto cell = row->second.find(o); cell != row->second.end()) total += cell->second;
        }
        return total;
      };
      std::stable_sort(absent.begin(), absent.end(), [&](const auto& a, const auto& b) {
        const auto fa = affinity(a), fb = affinity(b);
        return fa != fb ? fa > fb : frequency(a) > frequency(b);
      });
    }
    absent.resize(k);

    for (std::size_t i = 0; i < std::max(present.size(), absent.size()); ++i) {
      if (i < present.size())
        out.push_back({image, pope_question(present[i]), "", Polarity::yes, Polarity::no, std::nullopt, options.mode});
      if (i < absent.size())
        out.push_back({image, pope_question(absent[i]), "", Polarity::no, Polarity::no, std::nullopt, options.mode});
    }
  }
  return out;
}

}  // namespace halcor::eval
