#include "halcor/config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "halcor/backends.hpp"
#include "halcor/errors.hpp"

namespace halcor {

using nlohmann::json;

namespace {

const std::set<std::string, std::less<>> kKeys = {
    "endpoints",       "timeout_s",      "retries",     "backoff_s",       "cache_enabled",
    "cache_dir",       "box_threshold",  "text_threshold", "suppression_iou", "batch_detection",
    "temperature",     "max_tokens",     "template_dir", "template_version", "concurrency",
    "max_attribute_questions", "claim_mode", "unknown_default", "output_dir", "mock_dir",
};

template <typename T>
T value_of(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("config key '{}' has the wrong type", key));
  }
}

std::filesystem::path path_of(const json& j, const char* key, const std::filesystem::path& base) {
  std::filesystem::path p = value_of<std::string>(j, key);
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
  RunConfig c;
  if (j.contains("endpoints")) {
    const auto& e = j.at("endpoints");
    if (!e.is_object()) throw ConfigError("'endpoints' must be an object");
    for (const auto& [name, url] : e.items()) {
      BackendKind kind;
      if (name == "chat") kind = BackendKind::chat;
      else if (name == "detect") kind = BackendKind::detect;
      else if (name == "vqa") kind = BackendKind::vqa;
      else throw ConfigError(fmt::format("unknown endpoint '{}'", name));
      if (!url.is_string()) throw ConfigError(fmt::format("endpoint '{}' must be a string", name));
      c.backend.endpoints[kind] = url.get<std::string>();
    }
  }
  if (j.contains("timeout_s")) c.backend.timeout = std::chrono::duration<double>(value_of<double>(j, "timeout_s"));
  if (j.contains("retries")) c.backend.retry_count = value_of<int>(j, "retries");
  if (j.contains("backoff_s"))
    c.backend.backoff_initial = std::chrono::duration<double>(value_of<double>(j, "backoff_s"));
  if (j.contains("cache_enabled")) c.backend.cache_enabled = value_of<bool>(j, "cache_enabled");
  if (j.contains("cache_dir")) c.backend.cache_dir = path_of(j, "cache_dir", base_dir);

  auto& v = c.pipeline.validator;
  if (j.contains("box_threshold")) v.box_threshold = value_of<double>(j, "box_threshold");
  if (j.contains("text_threshold")) v.text_threshold = value_of<double>(j, "text_threshold");
  if (j.contains("suppression_iou")) {
    v.suppression_iou = j.at("suppression_iou").is_null() ? std::nullopt
                                                          : std::optional(value_of<double>(j, "suppression_iou"));
  }
  if (j.contains("batch_detection")) v.batch_phrases = value_of<bool>(j, "batch_detection");

  if (j.contains("temperature")) c.pipeline.chat.temperature = value_of<double>(j, "temperature");
  if (j.contains("max_tokens")) c.pipeline.chat.max_tokens = value_of<int>(j, "max_tokens");
  if (j.contains("concurrency")) c.pipeline.concurrency = value_of<std::size_t>(j, "concurrency");
  if (j.contains("max_attribute_questions"))
    c.pipeline.max_attribute_questions = value_of<std::size_t>(j, "max_attribute_questions");
  if (j.contains("claim_mode")) {
    const auto m = value_of<std::string>(j, "claim_mode");
    if (m == "llm") c.pipeline.claim_mode = ClaimMode::llm;
    else if (m == "rule") c.pipeline.claim_mode = ClaimMode::rule;
    else if (m == "hybrid") c.pipeline.claim_mode = ClaimMode::hybrid;
    else throw ConfigError(fmt::format("claim_mode must be llm, rule or hybrid, got '{}'", m));
  }
  if (j.contains("unknown_default")) {
    const auto p = value_of<std::string>(j, "unknown_default");
    if (p != "yes" && p != "no") throw ConfigError("unknown_default must be \"yes\" or \"no\"");
    c.pipeline.unknown_default = p == "yes" ? Polarity::yes : Polarity::no;
  }

  if (j.contains("template_dir")) c.template_dir = path_of(j, "template_dir", base_dir);
  if (j.contains("template_version")) c.template_version = value_of<int>(j, "template_version");
  if (j.contains("output_dir")) c.output_dir = path_of(j, "output_dir", base_dir);
  if (j.contains("mock_dir")) c.mock_dir = path_of(j, "mock_dir", base_dir);
  c.backend.max_in_flight = std::max<std::size_t>(c.pipeline.concurrency, 1);
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config {} is not valid JSON: {}", file.string(), e.what()));
  }
  return from_json(j, file.parent_path());
}

void RunConfig::validate() const {
  try {
    backend.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const auto& v = pipeline.validator;
  if (!(v.box_threshold > 0.0 && v.box_threshold < 1.0)) throw ConfigError("box_threshold must be in (0, 1)");
  if (!(v.text_threshold > 0.0 && v.text_threshold < 1.0)) throw ConfigError("text_threshold must be in (0, 1)");
  if (v.suppression_iou && !(*v.suppression_iou > 0.0 && *v.suppression_iou <= 1.0))
    throw ConfigError("suppression_iou must be in (0, 1]");
  if (!(pipeline.chat.temperature >= 0.0 && pipeline.chat.temperature <= 1.0))
    throw ConfigError("temperature must be in [0, 1]");
  if (pipeline.chat.max_tokens <= 0) throw ConfigError("max_tokens must be positive");
  if (pipeline.concurrency == 0) throw ConfigError("concurrency must be at least 1");
  if (!mock_dir) {
    for (auto kind : {BackendKind::chat, BackendKind::detect, BackendKind::vqa}) {
      if (!backend.endpoints.count(kind))
        throw ConfigError(fmt::format("no endpoint for '{}' and no mock directory", to_string(kind)));
    }
  }
}

std::shared_ptr<Backend> make_backend(const RunConfig& config) {
  if (config.mock_dir) return std::make_shared<FixtureBackend>(*config.mock_dir);
  return std::make_shared<HttpBackend>(config.backend);
}

TemplateSet load_templates(const RunConfig& config) {
  auto set = TemplateSet::builtin();
  if (config.template_dir) {
    try {
      set = set.with_overrides(*config.template_dir);
    } catch (const TemplateError& e) {
      throw ConfigError(e.what());
    }
  }
  if (config.template_version) {
    for (auto id : {template_ids::kConceptExtraction, template_ids::kQuestionFormulation, template_ids::kQaToClaim,
                    template_ids::kCorrection, template_ids::kJudge}) {
      if (set.get(id).version != *config.template_version)
        throw ConfigError(fmt::format("template '{}' is version {}, config asks for {}", id, set.get(id).version,
                                      *config.template_version));
    }
  }
  return set;
}

}  // namespace halcor
